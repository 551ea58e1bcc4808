#pragma once

#include "odl/batch.hpp"
#include "odl/lasso.hpp"

#include <cstdint>
#include <vector>

namespace odl {

/// fixed: grid entries are penalty levels used as-is.
/// scaled: grid entries are constants C, and the penalty at cumulative size
/// N is C * sqrt(log(p) / N).
enum class GridMode { fixed, scaled };

/// Tuning-grid state: the candidates, the per-batch selections, and the
/// prediction-error table that drove them. Row 1 of pe_table holds the
/// first-batch cross-validation errors; later rows hold rolling prediction
/// errors, one column per grid entry.
struct TuningState {
    GridMode mode = GridMode::fixed;
    std::vector<double> grid;
    std::vector<double> selected;
    std::vector<std::vector<double>> pe_table;
};

/// Grids must be non-empty, strictly increasing, and non-negative.
void validate_grid(const std::vector<double>& grid);

/// Mean squared prediction error of beta on the batch.
double prediction_error(const BatchData& batch, const Vector& beta);

/// Score every track's current estimate on the incoming batch and pick the
/// grid entry with the smallest prediction error (ties toward the smaller
/// entry). Tracks must still hold the previous batch's estimates. The PE row
/// and the winning entry are recorded in state; the winning index is
/// returned.
std::size_t select_lambda(TuningState& state, const BatchData& batch,
                          const std::vector<LassoTrack>& tracks);

/// Deterministic K-fold split of n row indices: a seeded shuffle followed by
/// contiguous chunks (sizes differ by at most one).
std::vector<std::vector<long>> cv_folds(long n, long k, std::uint64_t seed);

/// K-fold cross-validation on the first batch only: fit each candidate on
/// each training complement (cold start) and average the held-out MSE.
/// lambdas holds the actual penalty values to evaluate (already scaled in
/// scaled mode, one per grid entry). The mean errors are recorded as the
/// first pe_table row and the winning entry in state.selected; the winning
/// index is returned.
std::size_t first_batch_cv(TuningState& state, const BatchData& batch,
                           const std::vector<double>& lambdas, long folds,
                           std::uint64_t seed, const SolverConfig& cfg);

} // namespace odl
