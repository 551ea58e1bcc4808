#include "odl/lasso.hpp"

#include "odl/errors.hpp"

#include <string>
#include <utility>

namespace odl {

LassoTrack make_lasso_track(double lambda, long p) {
    LassoTrack track;
    track.lambda = lambda;
    track.beta = Vector::Zero(p);
    return track;
}

void update_beta(LassoTrack& track, const CumulativeStats& stats, const SolverConfig& cfg) {
    if (stats.N() < 1) {
        throw UsageError("update_beta requires ingested data");
    }
    SolveReport report = solve_l1(stats.S(), stats.U(), static_cast<double>(stats.N()),
                                  track.lambda, track.beta, cfg);
    track.beta = report.coefficients;
    track.last_report = std::move(report);
    track.last_report.coefficients.resize(0); // avoid storing the vector twice
}

double sigma2_step(double sigma2_prev, double N_prev, double N_new, double rss) {
    return (N_prev / N_new) * sigma2_prev + rss / N_new;
}

void update_sigma2(LassoTrack& track, const BatchData& batch, long N_prev, long N_new) {
    if (batch.cols() != track.beta.size() || batch.rows() != batch.y.size()) {
        throw DataError("update_sigma2: batch dimensions do not match the track");
    }
    if (N_new != N_prev + batch.rows()) {
        throw UsageError("update_sigma2: N_new must equal N_prev + batch rows");
    }
    const double rss = (batch.y - batch.X * track.beta).squaredNorm();
    track.sigma2 = sigma2_step(track.sigma2, static_cast<double>(N_prev),
                               static_cast<double>(N_new), rss);
}

} // namespace odl
