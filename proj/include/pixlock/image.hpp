#pragma once

#include <cstdint>
#include <vector>

#include "pixlock/errors.hpp"

namespace pixlock {

/// Interleaved 8-bit pixel buffer, row-major. channels is 1 (gray),
/// 3 (RGB) or 4 (RGBA).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h, int c)
        : width(w), height(h), channels(c),
          pixels(static_cast<std::size_t>(w) * h * c, 0) {}

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    std::size_t byte_count() const { return pixel_count() * channels; }

    std::uint8_t* at(int x, int y) {
        return pixels.data() + (static_cast<std::size_t>(y) * width + x) * channels;
    }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + (static_cast<std::size_t>(y) * width + x) * channels;
    }

    void validate() const {
        if (width < 1 || height < 1) throw ValidationError("image dimensions must be >= 1");
        if (channels != 1 && channels != 3 && channels != 4) {
            throw ValidationError("image channels must be 1, 3 or 4");
        }
        if (pixels.size() != byte_count()) {
            throw ValidationError("image buffer size does not match dimensions");
        }
    }

    bool operator==(const Image&) const = default;
};

}  // namespace pixlock
