#pragma once

#include "odl/projection.hpp"

#include <limits>
#include <utility>

namespace odl {

enum class InferenceStatus { ok, non_identifiable };

/// Debiased point estimate, its scale, and the confidence interval for one
/// coordinate at one emission point. Coordinates are reported 1-based.
struct InferenceResult {
    long r = 0;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double tau = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    double ci_low = std::numeric_limits<double>::quiet_NaN();
    double ci_high = std::numeric_limits<double>::quiet_NaN();
    double alpha = 0.05;
    long N = 0;
    InferenceStatus status = InferenceStatus::ok;
};

/// One-step corrected estimate beta_r + (a2 - A1'beta) / a1.
/// Throws NumericError if a1 is exactly zero; callers should consult
/// identifiable() first for the graded guard.
double debiased_estimate(double beta_r, const Vector& beta, const ProjectionTrack& track);

/// Scale factor sqrt(zz) / a1; multiplied by the noise SD it gives the
/// standard error of the corrected estimate.
double tau(const ProjectionTrack& track);

/// estimate +/- Phi^{-1}(1 - alpha/2) * sigma * tau.
std::pair<double, double> confidence_interval(double estimate, double sigma, double tau,
                                              double alpha);

/// Inverse standard-normal CDF. Rational approximation plus one Halley
/// refinement against the erfc-based CDF; absolute error below 1e-8 across
/// [1e-10, 1 - 1e-10]. Throws UsageError outside (0, 1).
double norm_quantile(double q);

/// Standard-normal CDF via erfc.
double norm_cdf(double x);

} // namespace odl
