#pragma once

#include "odl/engine.hpp"

#include <string>

namespace odl {

/// Binary checkpoint format: magic "ODL1", format version u16, then
/// length-prefixed little-endian sections in fixed order (dims, S row-major,
/// U, yy, N, b, lasso tracks, projection tracks, tuning history), closed by
/// a CRC32 of everything before it. Numeric payloads are raw IEEE-754 bits,
/// so save/load round-trips are bit-exact.
void write_checkpoint(const EngineState& state, const std::string& path);

/// Throws CheckpointError on bad magic, unsupported version, truncation, or
/// checksum mismatch.
EngineState read_checkpoint(const std::string& path);

} // namespace odl
