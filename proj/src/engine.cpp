#include "odl/engine.hpp"

#include "odl/errors.hpp"
#include "odl/parallel.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace odl {

namespace {

void validate_config(const EngineConfig& cfg) {
    validate_grid(cfg.grid);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw UsageError("alpha must lie in (0, 1)");
    }
    if (cfg.cv_folds < 2) {
        throw UsageError("cv_folds must be at least 2");
    }
    if (cfg.audit_every < 0) {
        throw UsageError("audit_every must be non-negative");
    }
}

} // namespace

Engine::Engine(EngineConfig cfg) : cfg_(std::move(cfg)) {
    validate_config(cfg_);
    tuning_.mode = cfg_.grid_mode;
    tuning_.grid = cfg_.grid;
}

Engine::Engine(EngineConfig cfg, EngineState state) : cfg_(std::move(cfg)) {
    // Structure comes from the snapshot; re-align the config with it.
    cfg_.grid = state.grid;
    cfg_.grid_mode = state.mode;
    cfg_.coords.clear();
    for (const auto& track : state.projections) cfg_.coords.push_back(track.r);
    validate_config(cfg_);

    stats_.restore(std::move(state.S), std::move(state.U), state.yy, state.N, state.b);
    tuning_.mode = state.mode;
    tuning_.grid = std::move(state.grid);
    tuning_.selected = std::move(state.selected);
    tuning_.pe_table = std::move(state.pe_table);
    tracks_ = std::move(state.lasso);
    projections_ = std::move(state.projections);
    coords_ = cfg_.coords;
    sigma2_ = state.sigma2;

    if (tracks_.size() != tuning_.grid.size()) {
        throw DataError("engine state: track count does not match the grid");
    }
    for (const auto& track : tracks_) {
        if (track.beta.size() != stats_.p()) {
            throw DataError("engine state: track dimension does not match p");
        }
    }
}

void Engine::init_tracks(long p) {
    coords_ = cfg_.coords;
    if (coords_.empty()) {
        if (p > 500) {
            throw UsageError("p = " + std::to_string(p) +
                             " exceeds 500; supply an explicit coordinate list");
        }
        for (long r = 0; r < p; ++r) coords_.push_back(r);
    }
    for (long r : coords_) {
        if (r < 0 || r >= p) {
            throw UsageError("coordinate " + std::to_string(r + 1) + " out of range 1.." +
                             std::to_string(p));
        }
    }
    tracks_.clear();
    for (double g : cfg_.grid) {
        // In scaled mode the per-batch value is filled in before each solve.
        tracks_.push_back(make_lasso_track(cfg_.grid_mode == GridMode::fixed ? g : 0.0, p));
    }
    projections_.clear();
    for (long r : coords_) projections_.push_back(make_projection_track(r, p));
}

std::vector<double> Engine::lambdas_at(long n_total, long p) const {
    std::vector<double> lambdas = cfg_.grid;
    if (cfg_.grid_mode == GridMode::scaled) {
        const double scale =
            std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n_total));
        for (double& v : lambdas) v *= scale;
    }
    return lambdas;
}

void Engine::refresh_track_lambdas(long n_total) {
    const auto lambdas = lambdas_at(n_total, stats_.p());
    for (std::size_t i = 0; i < tracks_.size(); ++i) tracks_[i].lambda = lambdas[i];
}

void Engine::maybe_audit(const Matrix& S, const Vector& U, double N, double lambda,
                         const Vector& beta) {
    ++solve_counter_;
    if (cfg_.audit_every <= 0 || solve_counter_ % cfg_.audit_every != 0) return;
    const double v = subgradient_violation(S, U, N, lambda, beta);
    ++audit_.checked;
    if (v > audit_.max_violation) audit_.max_violation = v;
}

double Engine::last_lambda() const {
    if (tuning_.selected.empty()) {
        throw UsageError("no batch has been processed yet");
    }
    return tuning_.selected.back();
}

BatchOutput Engine::process_batch(const BatchData& batch) {
    const bool first = stats_.empty();
    validate_batch(batch, first ? 0 : stats_.p());

    std::size_t sel;
    if (first) {
        init_tracks(batch.cols());
        sel = first_batch_cv(tuning_, batch, lambdas_at(batch.rows(), batch.cols()),
                             cfg_.cv_folds, cfg_.seed, cfg_.solver);
    } else {
        // Tracks still hold the previous batch's estimates here, which is
        // exactly what rolling prediction error scores.
        sel = select_lambda(tuning_, batch, tracks_);
    }

    const long n_prev = stats_.N();
    stats_.ingest(batch);
    const long n_new = stats_.N();
    if (cfg_.grid_mode == GridMode::scaled) refresh_track_lambdas(n_new);

    parallel_for(static_cast<long>(tracks_.size()), [&](long i) {
        auto& track = tracks_[static_cast<std::size_t>(i)];
        update_beta(track, stats_, cfg_.solver);
        update_sigma2(track, batch, n_prev, n_new);
    });
    for (const auto& track : tracks_) {
        maybe_audit(stats_.S(), stats_.U(), static_cast<double>(n_new), track.lambda,
                    track.beta);
    }

    const LassoTrack& chosen = tracks_[sel];
    const double rss_sel = (batch.y - batch.X * chosen.beta).squaredNorm();
    sigma2_ = sigma2_step(sigma2_, static_cast<double>(n_prev),
                          static_cast<double>(n_new), rss_sel);

    const double lambda_b = chosen.lambda;
    parallel_for(static_cast<long>(projections_.size()), [&](long i) {
        auto& track = projections_[static_cast<std::size_t>(i)];
        update_gamma(track, stats_, lambda_b, cfg_.solver);
        accumulate(track, batch);
    });
    if (cfg_.audit_every > 0) {
        Matrix R;
        Vector T;
        for (const auto& track : projections_) {
            ++solve_counter_;
            if (solve_counter_ % cfg_.audit_every != 0) continue;
            project_submatrices(stats_.S(), track.r, R, T);
            const double v = subgradient_violation(R, T, static_cast<double>(n_new),
                                                   lambda_b, track.gamma);
            ++audit_.checked;
            if (v > audit_.max_violation) audit_.max_violation = v;
        }
    } else {
        solve_counter_ += static_cast<long>(projections_.size());
    }

    BatchOutput out;
    out.batch = stats_.batches();
    out.lambda = lambda_b;
    out.sigma2 = sigma2_;
    out.results.reserve(projections_.size());
    const double sigma_hat = std::sqrt(sigma2_);
    for (const auto& track : projections_) {
        InferenceResult res;
        res.r = track.r + 1;
        res.alpha = cfg_.alpha;
        res.N = n_new;
        if (!identifiable(track, n_new)) {
            res.status = InferenceStatus::non_identifiable;
        } else {
            res.status = InferenceStatus::ok;
            res.estimate = debiased_estimate(chosen.beta[track.r], chosen.beta, track);
            res.tau = tau(track);
            res.se = sigma_hat * res.tau;
            auto ci = confidence_interval(res.estimate, sigma_hat, res.tau, cfg_.alpha);
            res.ci_low = ci.first;
            res.ci_high = ci.second;
        }
        out.results.push_back(res);
    }
    return out;
}

EngineState Engine::snapshot() const {
    EngineState st;
    st.p = stats_.p();
    st.S = stats_.S();
    st.U = stats_.U();
    st.yy = stats_.yy();
    st.N = stats_.N();
    st.b = stats_.batches();
    st.mode = tuning_.mode;
    st.grid = tuning_.grid;
    st.selected = tuning_.selected;
    st.pe_table = tuning_.pe_table;
    st.lasso = tracks_;
    st.projections = projections_;
    st.sigma2 = sigma2_;
    return st;
}

} // namespace odl
