#include "odl/projection.hpp"

#include "odl/errors.hpp"

#include <string>
#include <utility>

namespace odl {

ProjectionTrack make_projection_track(long r, long p) {
    if (r < 0 || r >= p) {
        throw UsageError("coordinate " + std::to_string(r + 1) + " out of range 1.." +
                         std::to_string(p));
    }
    ProjectionTrack track;
    track.r = r;
    track.gamma = Vector::Zero(p - 1);
    track.A1 = Vector::Zero(p);
    return track;
}

void update_gamma(ProjectionTrack& track, const CumulativeStats& stats, double lambda,
                  const SolverConfig& cfg) {
    Matrix R;
    Vector T;
    project_submatrices(stats.S(), track.r, R, T);
    SolveReport report = solve_l1(R, T, static_cast<double>(stats.N()), lambda,
                                  track.gamma, cfg);
    track.gamma = report.coefficients;
    track.last_report = std::move(report);
    track.last_report.coefficients.resize(0);
}

void accumulate(ProjectionTrack& track, const BatchData& batch) {
    const long p = batch.cols();
    if (p != track.A1.size() || batch.rows() != batch.y.size()) {
        throw DataError("accumulate: batch dimensions do not match the projection track");
    }
    const long r = track.r;
    const long tail = p - 1 - r;

    // z = x_r - X_{-r} * gamma, without materializing X_{-r}.
    Vector z = batch.X.col(r);
    if (r > 0) {
        z.noalias() -= batch.X.leftCols(r) * track.gamma.head(r);
    }
    if (tail > 0) {
        z.noalias() -= batch.X.rightCols(tail) * track.gamma.tail(tail);
    }

    Vector zx = batch.X.transpose() * z;
    track.a1 += zx[r];
    track.a2 += z.dot(batch.y);
    track.A1 += zx;
    track.zz += z.squaredNorm();
}

bool identifiable(const ProjectionTrack& track, long N) {
    return track.a1 > 1e-10 * static_cast<double>(N);
}

} // namespace odl
