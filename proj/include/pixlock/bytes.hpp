#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "pixlock/errors.hpp"

namespace pixlock {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

/// Constant-time equality for secret-dependent comparisons (MAC tags).
bool ct_equal(ByteView a, ByteView b);

/// Little-endian byte writer. Every multi-byte integer in the on-disk
/// formats goes through this so layouts are pinned across platforms.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(ByteView data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
    void raw(std::string_view s) {
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    /// u32 length prefix followed by the bytes.
    void blob(ByteView data);
    void blob(std::string_view s) {
        blob(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }
    std::size_t size() const { return buf_.size(); }

private:
    Bytes buf_;
};

/// Bounds-checked little-endian reader; throws IntegrityError on any
/// attempt to read past the end (truncated file).
class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    Bytes raw(std::size_t n);
    Bytes blob();
    std::string blob_string();

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n);
    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace pixlock
