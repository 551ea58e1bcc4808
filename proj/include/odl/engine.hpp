#pragma once

#include "odl/debias.hpp"
#include "odl/lasso.hpp"
#include "odl/projection.hpp"
#include "odl/suffstats.hpp"
#include "odl/tuning.hpp"

#include <cstdint>
#include <vector>

namespace odl {

struct EngineConfig {
    std::vector<double> grid = {0.15, 0.20, 0.25, 0.30};
    GridMode grid_mode = GridMode::fixed;
    std::vector<long> coords; ///< 0-based; empty selects all p while p <= 500
    double alpha = 0.05;
    SolverConfig solver;
    std::uint64_t seed = 1;   ///< first-batch CV shuffle seed
    long cv_folds = 5;
    long audit_every = 0;     ///< audit every n-th solve against the
                              ///< subgradient conditions (0 = off)
};

/// Running summary of the optional optimality audit.
struct AuditStats {
    long checked = 0;
    double max_violation = 0.0;
};

/// Everything the engine needs to resume a stream: plain data, serialized
/// verbatim by the checkpoint module.
struct EngineState {
    long p = 0;
    Matrix S;
    Vector U;
    double yy = 0.0;
    long N = 0;
    long b = 0;
    GridMode mode = GridMode::fixed;
    std::vector<double> grid;
    std::vector<double> selected;
    std::vector<std::vector<double>> pe_table;
    std::vector<LassoTrack> lasso;
    std::vector<ProjectionTrack> projections;
    double sigma2 = 0.0; ///< selected-path noise-variance recursion
};

/// Per-batch output: the penalty that was selected for the batch, the
/// current noise-variance estimate, and one inference row per tracked
/// coordinate (in configuration order).
struct BatchOutput {
    long batch = 0;
    double lambda = 0.0;
    double sigma2 = 0.0;
    std::vector<InferenceResult> results;
};

/// The streaming pipeline: one instance per stream. For each arriving batch
/// it selects the penalty (first-batch CV, then rolling prediction error),
/// folds the batch into the sufficient statistics, refreshes every lasso
/// track and projection track, advances the noise-variance recursions, and
/// emits debiased estimates with confidence intervals.
///
/// Standard errors use the selected-path sigma^2 (each batch's residual
/// evaluated at that batch's selected estimate); the per-track recursions are
/// maintained alongside and visible via lasso_tracks().
class Engine {
public:
    explicit Engine(EngineConfig cfg);

    /// Resume from a snapshot. Structural fields (grid, mode, tracked
    /// coordinates) come from the state; cfg supplies solver settings, alpha,
    /// seed, and audit preferences.
    Engine(EngineConfig cfg, EngineState state);

    BatchOutput process_batch(const BatchData& batch);

    EngineState snapshot() const;

    const EngineConfig& config() const { return cfg_; }
    const CumulativeStats& stats() const { return stats_; }
    const TuningState& tuning() const { return tuning_; }
    const std::vector<LassoTrack>& lasso_tracks() const { return tracks_; }
    const std::vector<ProjectionTrack>& projection_tracks() const { return projections_; }
    const std::vector<long>& coords() const { return coords_; }
    double sigma2() const { return sigma2_; }
    double last_lambda() const;
    const AuditStats& audit() const { return audit_; }

private:
    void init_tracks(long p);
    std::vector<double> lambdas_at(long n_total, long p) const;
    void refresh_track_lambdas(long n_total);
    void maybe_audit(const Matrix& S, const Vector& U, double N, double lambda,
                     const Vector& beta);

    EngineConfig cfg_;
    CumulativeStats stats_;
    TuningState tuning_;
    std::vector<LassoTrack> tracks_;
    std::vector<ProjectionTrack> projections_;
    std::vector<long> coords_;
    double sigma2_ = 0.0;
    AuditStats audit_;
    long solve_counter_ = 0;
};

} // namespace odl
