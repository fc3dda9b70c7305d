#include "pixlock/compress.hpp"

#include <zlib.h>

namespace pixlock {

namespace {
constexpr int kDeflateLevel = 6;
}

Bytes deflate_bytes(ByteView data) {
    uLongf bound = compressBound(static_cast<uLong>(data.size()));
    Bytes out(bound);
    int rc = compress2(out.data(), &bound, data.data(), static_cast<uLong>(data.size()),
                       kDeflateLevel);
    if (rc != Z_OK) {
        throw Error("deflate failed: zlib error " + std::to_string(rc));
    }
    out.resize(bound);
    return out;
}

Bytes inflate_bytes(ByteView data, std::size_t expected_size) {
    if (expected_size == 0) return {};
    Bytes out(expected_size);
    uLongf len = static_cast<uLongf>(expected_size);
    int rc = uncompress(out.data(), &len, data.data(), static_cast<uLong>(data.size()));
    if (rc != Z_OK || len != expected_size) {
        throw IntegrityError("inflate failed or produced unexpected size");
    }
    return out;
}

}  // namespace pixlock
