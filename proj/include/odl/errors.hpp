#pragma once

#include <stdexcept>
#include <string>

namespace odl {

/// Error categories; the CLI maps them onto its exit codes
/// (usage -> 1, data/checkpoint -> 2, numeric -> 3).
enum class ErrorKind { usage, data, numeric, checkpoint };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Caller asked for something the interface does not allow (bad flag values,
/// probabilities outside (0,1), empty grids, ...).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& m) : Error(ErrorKind::usage, m) {}
};

/// The data violate a contract: dimension mismatches, non-finite entries,
/// schema drift between batches, unparsable files.
class DataError : public Error {
public:
    explicit DataError(const std::string& m) : Error(ErrorKind::data, m) {}
};

/// Numerical failure: solver divergence, NaN propagation, degenerate systems.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& m) : Error(ErrorKind::numeric, m) {}
};

/// Checkpoint file problems: bad magic, version mismatch, truncation,
/// checksum failure.
class CheckpointError : public Error {
public:
    explicit CheckpointError(const std::string& m) : Error(ErrorKind::checkpoint, m) {}
};

} // namespace odl
