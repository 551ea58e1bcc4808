#include "odl/suffstats.hpp"

#include "odl/errors.hpp"

#include <string>
#include <utility>

namespace odl {

void CumulativeStats::ingest(const BatchData& batch) {
    validate_batch(batch, p_);
    const long p = batch.cols();
    const long n = batch.rows();

    // Accumulate one triangle of X'X and mirror it so S stays exactly
    // symmetric (a general matrix product may round the two triangles
    // differently).
    Matrix xtx = Matrix::Zero(p, p);
    xtx.selfadjointView<Eigen::Lower>().rankUpdate(batch.X.transpose());
    Matrix xtx_full = xtx.selfadjointView<Eigen::Lower>();
    Vector xty = batch.X.transpose() * batch.y;
    const double yty = batch.y.squaredNorm();

    // All allocations are done; from here on nothing can throw.
    if (p_ == 0) {
        p_ = p;
        S_ = std::move(xtx_full);
        U_ = std::move(xty);
    } else {
        S_ += xtx_full;
        U_ += xty;
    }
    yy_ += yty;
    N_ += n;
    b_ += 1;
}

void CumulativeStats::restore(Matrix S, Vector U, double yy, long N, long b) {
    if (S.rows() != S.cols() || S.rows() != U.size()) {
        throw DataError("inconsistent dimensions in restored statistics");
    }
    p_ = static_cast<long>(S.rows());
    S_ = std::move(S);
    U_ = std::move(U);
    yy_ = yy;
    N_ = N;
    b_ = b;
}

void project_submatrices(const Matrix& S, long r, Matrix& R, Vector& T) {
    const long p = static_cast<long>(S.rows());
    if (r < 0 || r >= p) {
        throw UsageError("coordinate " + std::to_string(r + 1) + " out of range 1.." +
                         std::to_string(p));
    }
    const long tail = p - 1 - r;
    R.resize(p - 1, p - 1);
    T.resize(p - 1);
    R.topLeftCorner(r, r) = S.topLeftCorner(r, r);
    R.topRightCorner(r, tail) = S.topRightCorner(r, tail);
    R.bottomLeftCorner(tail, r) = S.bottomLeftCorner(tail, r);
    R.bottomRightCorner(tail, tail) = S.bottomRightCorner(tail, tail);
    T.head(r) = S.col(r).head(r);
    T.tail(tail) = S.col(r).tail(tail);
}

} // namespace odl
