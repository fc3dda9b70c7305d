#pragma once

#include "pixlock/bytes.hpp"

namespace pixlock {

/// zlib deflate at a fixed level so identical input produces identical
/// streams on every run.
Bytes deflate_bytes(ByteView data);

/// Inflates and checks the decompressed size; throws IntegrityError on
/// malformed streams or size mismatch.
Bytes inflate_bytes(ByteView data, std::size_t expected_size);

}  // namespace pixlock
