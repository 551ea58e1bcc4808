#pragma once

#include "odl/types.hpp"

namespace odl {

/// Proximal-gradient solver settings.
///
/// eta == 0 selects the automatic step size 0.9 * N / max_row_sum(|S|)
/// (the row-sum bound dominates the largest eigenvalue, so the step is always
/// stable); a positive value is used as-is. tol applies to the composite
/// mapping residual ||beta - prox(beta - eta * grad)|| / eta, which does reach
/// zero at sparse optima; raw_gradient_stop switches to the plain gradient
/// norm instead (that criterion can only fire at dense optima, so the solver
/// may run to max_iter under it).
struct SolverConfig {
    double eta = 0.0;
    double tol = 1e-6;
    long max_iter = 100000;
    bool raw_gradient_stop = false;
};

struct SolveReport {
    Vector coefficients;
    long iterations = 0;
    double final_grad_norm = 0.0;
    bool converged = false;
};

/// Soft-thresholding operator sgn(x) * max(|x| - t, 0).
double soft_threshold(double x, double t);

/// Gradient of the smooth part of the objective: (S*beta - U) / N.
Vector gradient(const Matrix& S, const Vector& U, double N, const Vector& beta);

/// Upper bound on the largest eigenvalue of S: max absolute row sum.
double row_sum_bound(const Matrix& S);

/// Penalized quadratic objective beta'S beta/(2N) - U'beta/N + lambda*|beta|_1
/// (the constant yy/(2N) term is omitted; pass yy/(2N) yourself if you need
/// the full least-squares value).
double l1_objective(const Matrix& S, const Vector& U, double N, double lambda,
                    const Vector& beta);

/// How far beta is from satisfying the L1 subgradient optimality conditions:
/// max over coordinates of |g_r| - lambda (zero coordinates, clamped at 0)
/// and |g_r + lambda*sgn(beta_r)| (active coordinates), with g = (S*beta-U)/N.
double subgradient_violation(const Matrix& S, const Vector& U, double N,
                             double lambda, const Vector& beta);

/// Minimize beta'S beta/(2N) - U'beta/N + lambda*||beta||_1 by iterating a
/// gradient step followed by soft-thresholding, starting from init. The
/// returned iterate is the post-threshold point, so at convergence the
/// subgradient conditions hold within (1 + eta*lmax/N)*tol. Deterministic
/// given identical inputs and configuration.
///
/// Throws NumericError if iterates become non-finite (non-PSD input) or the
/// objective rises for 50 consecutive iterations (step size too large).
/// Hitting max_iter is not an error: the last iterate is returned with
/// converged == false.
SolveReport solve_l1(const Matrix& S, const Vector& U, double N, double lambda,
                     const Vector& init, const SolverConfig& cfg = {});

} // namespace odl
