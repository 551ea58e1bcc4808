#pragma once

#include "odl/batch.hpp"

namespace odl {

/// Cumulative sufficient statistics of the stream: S = sum_j X_j'X_j,
/// U = sum_j X_j'y_j, yy = sum_j y_j'y_j, N = total rows, b = batch count.
/// Once a batch is folded in, its raw data are never needed again. S is
/// stored fully (both triangles) and kept exactly symmetric by accumulating
/// one triangle and mirroring.
class CumulativeStats {
public:
    CumulativeStats() = default;

    /// Fold one batch in. The update is atomic: validation and all allocating
    /// work happen before any member is touched, so a throw leaves the object
    /// unchanged.
    void ingest(const BatchData& batch);

    const Matrix& S() const { return S_; }
    const Vector& U() const { return U_; }
    double yy() const { return yy_; }
    long N() const { return N_; }
    long batches() const { return b_; }
    long p() const { return p_; }
    bool empty() const { return p_ == 0; }

    /// Replace the whole state (checkpoint restore).
    void restore(Matrix S, Vector U, double yy, long N, long b);

private:
    Matrix S_;
    Vector U_;
    double yy_ = 0.0;
    long N_ = 0;
    long b_ = 0;
    long p_ = 0;
};

/// Delete row and column r (0-based) of the symmetric matrix S:
/// R = S without row/column r, T = column r without its r-th entry.
/// Fresh copies are returned; cost is O(p^2) per call.
void project_submatrices(const Matrix& S, long r, Matrix& R, Vector& T);

} // namespace odl
