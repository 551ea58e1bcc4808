#include "odl/debias.hpp"

#include "odl/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace odl {

double debiased_estimate(double beta_r, const Vector& beta, const ProjectionTrack& track) {
    if (beta.size() != track.A1.size()) {
        throw DataError("debiased_estimate: coefficient vector does not match the track");
    }
    if (track.a1 == 0.0) {
        throw NumericError("coordinate " + std::to_string(track.r + 1) +
                           " is non-identifiable (a1 = 0)");
    }
    return beta_r + (track.a2 - track.A1.dot(beta)) / track.a1;
}

double tau(const ProjectionTrack& track) {
    if (track.a1 <= 0.0) {
        throw NumericError("coordinate " + std::to_string(track.r + 1) +
                           " is non-identifiable (a1 <= 0)");
    }
    return std::sqrt(track.zz) / track.a1;
}

std::pair<double, double> confidence_interval(double estimate, double sigma, double tau,
                                              double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw UsageError("alpha must lie in (0, 1)");
    }
    if (sigma < 0.0 || tau < 0.0) {
        throw UsageError("sigma and tau must be non-negative");
    }
    const double half = norm_quantile(1.0 - alpha / 2.0) * sigma * tau;
    return {estimate - half, estimate + half};
}

namespace {

// Lower-tail rational approximation (absolute error ~1e-9), then one Halley
// step against the exact CDF. For q <= 0.5 both Phi(x) and q are small
// numbers, so the residual Phi(x) - q is computed at full precision and the
// refinement lands within ~1e-15 of the true quantile. The upper half is
// handled by reflection; 1 - q is exact for q >= 0.5.
double quantile_lower_half(double q) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    double x;
    if (q < plow) {
        const double r = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    } else {
        const double r = q - 0.5;
        const double s = r * r;
        x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
            (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
    }

    // Halley refinement: f = Phi(x) - q, f' = phi(x), f''/f' = -x.
    // x <= ~0 here, so Phi(x) = erfc(-x/sqrt2)/2 is evaluated in its accurate
    // small-argument regime.
    const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
    const double e = cdf - q;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

} // namespace

double norm_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw UsageError("quantile probability must lie in (0, 1)");
    }
    if (q == 0.5) return 0.0;
    if (q < 0.5) return quantile_lower_half(q);
    return -quantile_lower_half(1.0 - q);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

} // namespace odl
