#pragma once

#include "odl/solver.hpp"
#include "odl/suffstats.hpp"

namespace odl {

/// Per-coordinate projection state. gamma regresses column r on the other
/// columns through the penalized solver; the scalar/vector accumulators
/// collect the residual inner products batch by batch, which is all the
/// debiasing step ever needs.
struct ProjectionTrack {
    long r = 0;      ///< 0-based coordinate index
    Vector gamma;    ///< p-1 projection coefficients
    double a1 = 0.0; ///< sum_j z_j' x_r_j
    double a2 = 0.0; ///< sum_j z_j' y_j
    Vector A1;       ///< p entries, sum_j X_j' z_j
    double zz = 0.0; ///< sum_j z_j' z_j
    SolveReport last_report;
};

ProjectionTrack make_projection_track(long r, long p);

/// Refresh gamma against the committed statistics (current batch already
/// ingested), warm-starting from the previous value.
void update_gamma(ProjectionTrack& track, const CumulativeStats& stats, double lambda,
                  const SolverConfig& cfg);

/// Compute the residual z = x_r - X_{-r} * gamma on the current batch only
/// and fold its inner products into the accumulators. update_gamma must have
/// run for this batch first. A1[r] and a1 receive the exact same addend, so
/// they stay bit-identical.
void accumulate(ProjectionTrack& track, const BatchData& batch);

/// Identifiability guard: inference is emitted only while a1 > 1e-10 * N.
bool identifiable(const ProjectionTrack& track, long N);

} // namespace odl
