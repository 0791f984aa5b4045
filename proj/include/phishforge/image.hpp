#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phishforge::image {

// Decoded raster, always RGBA8 regardless of the source color type.
struct PixelImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels;  // 4 bytes per pixel, row-major

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

bool looks_like_png(std::string_view bytes);

// Throws ImageDecodeError on malformed input.
PixelImage decode_png(std::string_view bytes);
std::string encode_png(const PixelImage& img);

// Channel transforms; alpha is preserved untouched.
PixelImage lighten(const PixelImage& img);
PixelImage darken(const PixelImage& img);
PixelImage grayscale(const PixelImage& img);

}  // namespace phishforge::image
