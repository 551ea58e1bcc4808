#include "odl/tuning.hpp"

#include "odl/errors.hpp"
#include "odl/rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace odl {

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw UsageError("tuning grid must not be empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) {
            throw UsageError("tuning grid values must be non-negative");
        }
        if (i > 0 && grid[i] <= grid[i - 1]) {
            throw UsageError("tuning grid must be strictly increasing");
        }
    }
}

double prediction_error(const BatchData& batch, const Vector& beta) {
    if (batch.cols() != beta.size() || batch.rows() != batch.y.size()) {
        throw DataError("prediction_error: dimension mismatch");
    }
    return (batch.y - batch.X * beta).squaredNorm() / static_cast<double>(batch.rows());
}

std::size_t select_lambda(TuningState& state, const BatchData& batch,
                          const std::vector<LassoTrack>& tracks) {
    validate_grid(state.grid);
    if (tracks.size() != state.grid.size()) {
        throw UsageError("select_lambda: one track per grid entry is required");
    }
    std::vector<double> pe(tracks.size());
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        pe[i] = prediction_error(batch, tracks[i].beta);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < pe.size(); ++i) {
        if (pe[i] < pe[best]) best = i; // strict: ties keep the smaller entry
    }
    state.pe_table.push_back(std::move(pe));
    state.selected.push_back(state.grid[best]);
    return best;
}

std::vector<std::vector<long>> cv_folds(long n, long k, std::uint64_t seed) {
    if (k < 2) {
        throw UsageError("cross-validation needs at least 2 folds");
    }
    if (n < k) {
        throw DataError("cross-validation needs at least as many rows (" +
                        std::to_string(n) + ") as folds (" + std::to_string(k) + ")");
    }
    std::vector<long> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0L);
    std::mt19937_64 rng(mix64(seed));
    std::shuffle(idx.begin(), idx.end(), rng);

    std::vector<std::vector<long>> folds(static_cast<std::size_t>(k));
    for (long f = 0; f < k; ++f) {
        const long lo = f * n / k;
        const long hi = (f + 1) * n / k;
        folds[static_cast<std::size_t>(f)].assign(idx.begin() + lo, idx.begin() + hi);
    }
    return folds;
}

std::size_t first_batch_cv(TuningState& state, const BatchData& batch,
                           const std::vector<double>& lambdas, long folds,
                           std::uint64_t seed, const SolverConfig& cfg) {
    validate_grid(state.grid);
    if (lambdas.size() != state.grid.size()) {
        throw UsageError("first_batch_cv: one penalty value per grid entry is required");
    }
    const long n = batch.rows();
    const long p = batch.cols();
    const auto assignment = cv_folds(n, folds, seed);

    std::vector<double> mean_err(lambdas.size(), 0.0);
    for (const auto& holdout : assignment) {
        std::vector<char> held(static_cast<std::size_t>(n), 0);
        for (long row : holdout) held[static_cast<std::size_t>(row)] = 1;

        const long n_train = n - static_cast<long>(holdout.size());
        Matrix x_train(n_train, p);
        Vector y_train(n_train);
        Matrix x_test(static_cast<long>(holdout.size()), p);
        Vector y_test(static_cast<long>(holdout.size()));
        long ti = 0, hi = 0;
        for (long row = 0; row < n; ++row) {
            if (held[static_cast<std::size_t>(row)]) {
                x_test.row(hi) = batch.X.row(row);
                y_test[hi++] = batch.y[row];
            } else {
                x_train.row(ti) = batch.X.row(row);
                y_train[ti++] = batch.y[row];
            }
        }

        Matrix s_train = Matrix::Zero(p, p);
        s_train.selfadjointView<Eigen::Lower>().rankUpdate(x_train.transpose());
        Matrix s_full = s_train.selfadjointView<Eigen::Lower>();
        Vector u_train = x_train.transpose() * y_train;

        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            SolveReport fit = solve_l1(s_full, u_train, static_cast<double>(n_train),
                                       lambdas[i], Vector::Zero(p), cfg);
            mean_err[i] += (y_test - x_test * fit.coefficients).squaredNorm() /
                           static_cast<double>(y_test.size());
        }
    }
    for (double& e : mean_err) e /= static_cast<double>(assignment.size());

    std::size_t best = 0;
    for (std::size_t i = 1; i < mean_err.size(); ++i) {
        if (mean_err[i] < mean_err[best]) best = i;
    }
    state.pe_table.push_back(std::move(mean_err));
    state.selected.push_back(state.grid[best]);
    return best;
}

} // namespace odl
