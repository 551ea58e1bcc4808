#include "odl/batch.hpp"

#include "odl/errors.hpp"

#include <string>

namespace odl {

void validate_batch(const BatchData& batch, long expected_p) {
    if (batch.rows() < 1) {
        throw DataError("batch " + std::to_string(batch.batch_index) + " is empty");
    }
    if (batch.rows() != static_cast<long>(batch.y.size())) {
        throw DataError("batch " + std::to_string(batch.batch_index) + ": X has " +
                        std::to_string(batch.rows()) + " rows but y has " +
                        std::to_string(batch.y.size()) + " entries");
    }
    if (expected_p > 0 && batch.cols() != expected_p) {
        throw DataError("batch " + std::to_string(batch.batch_index) + ": expected " +
                        std::to_string(expected_p) + " columns, got " +
                        std::to_string(batch.cols()));
    }
    if (expected_p == 0 && batch.cols() < 1) {
        throw DataError("batch " + std::to_string(batch.batch_index) + " has no columns");
    }
    if (!batch.X.allFinite() || !batch.y.allFinite()) {
        throw DataError("batch " + std::to_string(batch.batch_index) +
                        " contains non-finite entries");
    }
}

} // namespace odl
