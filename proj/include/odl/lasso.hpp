#pragma once

#include "odl/solver.hpp"
#include "odl/suffstats.hpp"

namespace odl {

/// Per-penalty lasso state: the warm-started coefficient vector for one grid
/// value and that track's own running noise-variance recursion.
struct LassoTrack {
    double lambda = 0.0;
    Vector beta;
    double sigma2 = 0.0;
    SolveReport last_report;
};

LassoTrack make_lasso_track(double lambda, long p);

/// Re-solve the track against the current statistics, warm-starting from the
/// previous estimate. Solver errors propagate.
void update_beta(LassoTrack& track, const CumulativeStats& stats, const SolverConfig& cfg);

/// One step of the running noise-variance recursion:
/// sigma2 <- (N_prev/N_new) * sigma2 + rss / N_new,
/// which telescopes to (1/N_b) * sum_j rss_j.
double sigma2_step(double sigma2_prev, double N_prev, double N_new, double rss);

/// Fold the current batch's residual sum of squares (at track.beta) into the
/// track's sigma2. Call once per batch, after update_beta.
void update_sigma2(LassoTrack& track, const BatchData& batch, long N_prev, long N_new);

} // namespace odl
