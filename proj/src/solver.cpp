#include "odl/solver.hpp"

#include "odl/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace odl {

double soft_threshold(double x, double t) {
    const double mag = std::abs(x) - t;
    if (mag <= 0.0) return 0.0;
    return x > 0.0 ? mag : -mag;
}

Vector gradient(const Matrix& S, const Vector& U, double N, const Vector& beta) {
    if (N < 1.0) {
        throw UsageError("gradient requires at least one observation");
    }
    if (S.rows() != S.cols() || S.cols() != beta.size() || U.size() != beta.size()) {
        throw DataError("gradient: dimension mismatch");
    }
    Vector g = S * beta;
    g -= U;
    g /= N;
    return g;
}

double row_sum_bound(const Matrix& S) {
    if (S.size() == 0) return 0.0;
    return S.cwiseAbs().rowwise().sum().maxCoeff();
}

double l1_objective(const Matrix& S, const Vector& U, double N, double lambda,
                    const Vector& beta) {
    const double quad = beta.dot(S * beta) / (2.0 * N);
    const double lin = U.dot(beta) / N;
    return quad - lin + lambda * beta.lpNorm<1>();
}

double subgradient_violation(const Matrix& S, const Vector& U, double N,
                             double lambda, const Vector& beta) {
    Vector g = gradient(S, U, N, beta);
    double worst = 0.0;
    for (long i = 0; i < beta.size(); ++i) {
        double v;
        if (beta[i] == 0.0) {
            v = std::abs(g[i]) - lambda;
        } else {
            v = std::abs(g[i] + (beta[i] > 0.0 ? lambda : -lambda));
        }
        if (v > worst) worst = v;
    }
    return worst;
}

SolveReport solve_l1(const Matrix& S, const Vector& U, double N, double lambda,
                     const Vector& init, const SolverConfig& cfg) {
    const long p = static_cast<long>(init.size());
    if (S.rows() != S.cols() || S.cols() != p || U.size() != p) {
        throw DataError("solve_l1: dimension mismatch");
    }
    if (N < 1.0) {
        throw UsageError("solve_l1 requires at least one observation");
    }
    if (lambda < 0.0) {
        throw UsageError("penalty level must be non-negative");
    }
    if (cfg.eta < 0.0 || cfg.tol <= 0.0 || cfg.max_iter < 1) {
        throw UsageError("invalid solver configuration (eta >= 0, tol > 0, max_iter >= 1)");
    }

    double eta = cfg.eta;
    if (eta == 0.0) {
        const double bound = row_sum_bound(S);
        eta = bound > 0.0 ? 0.9 * N / bound : 1.0;
    }
    const double thresh = eta * lambda;

    SolveReport report;
    Vector beta = init;
    Vector sb(p);   // S * beta, reused for gradient and objective
    Vector next(p);

    double f_prev = std::numeric_limits<double>::infinity();
    int rising = 0;

    for (long it = 1; it <= cfg.max_iter; ++it) {
        sb.noalias() = S * beta;

        // Objective at the current iterate (constant term omitted); used only
        // by the divergence detector.
        const double f = (0.5 * beta.dot(sb) - U.dot(beta)) / N + lambda * beta.lpNorm<1>();
        if (!std::isfinite(f)) {
            throw NumericError(
                "solve_l1: objective became non-finite; the Gram matrix may not be "
                "positive semidefinite or the step size eta is too large");
        }
        if (f > f_prev) {
            if (++rising >= 50) {
                throw NumericError(
                    "solve_l1: objective increased for 50 consecutive iterations; "
                    "reduce the step size eta");
            }
        } else {
            rising = 0;
        }
        f_prev = f;

        for (long i = 0; i < p; ++i) {
            next[i] = soft_threshold(beta[i] - eta * (sb[i] - U[i]) / N, thresh);
        }

        const double resid = (beta - next).norm() / eta;
        beta.swap(next);
        report.iterations = it;

        if (cfg.raw_gradient_stop) {
            const double gn = ((S * beta - U) / N).norm();
            report.final_grad_norm = gn;
            if (gn <= cfg.tol) {
                report.converged = true;
                break;
            }
        } else {
            report.final_grad_norm = resid;
            if (resid <= cfg.tol) {
                report.converged = true;
                break;
            }
        }
    }

    report.coefficients = std::move(beta);
    return report;
}

} // namespace odl
