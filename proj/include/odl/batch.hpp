#pragma once

#include "odl/types.hpp"

namespace odl {

/// One batch of observations: n_j rows of covariates and their responses.
/// Batches are consumed once and never revisited.
struct BatchData {
    Matrix X;            ///< n_j x p covariates
    Vector y;            ///< n_j responses
    long batch_index = 0; ///< 1-based position in the stream (0 = unset)

    long rows() const { return static_cast<long>(X.rows()); }
    long cols() const { return static_cast<long>(X.cols()); }
};

/// Check shape and finiteness. expected_p == 0 skips the column check (used
/// for the first batch, which fixes p for the rest of the stream). Throws
/// DataError on violation.
void validate_batch(const BatchData& batch, long expected_p);

} // namespace odl
