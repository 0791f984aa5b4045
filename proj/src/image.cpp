#include "phishforge/image.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstring>

#include "phishforge/errors.hpp"

namespace phishforge::image {

namespace {

struct Reader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void read_fn(png_structp png, png_bytep out, png_size_t count) {
    auto* r = static_cast<Reader*>(png_get_io_ptr(png));
    if (r->pos + count > r->size) {
        png_error(png, "read past end");
    }
    std::memcpy(out, r->data + r->pos, count);
    r->pos += count;
}

void write_fn(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), count);
}

void flush_fn(png_structp) {}

std::uint8_t lighten_channel(std::uint8_t c) {
    return static_cast<std::uint8_t>(std::lround(c + 0.25 * (255 - c)));
}

std::uint8_t darken_channel(std::uint8_t c) {
    return static_cast<std::uint8_t>(std::lround(0.75 * c));
}

PixelImage map_rgb(const PixelImage& img, std::uint8_t (*f)(std::uint8_t)) {
    PixelImage out = img;
    for (std::size_t i = 0; i + 3 < out.pixels.size(); i += 4) {
        out.pixels[i] = f(out.pixels[i]);
        out.pixels[i + 1] = f(out.pixels[i + 1]);
        out.pixels[i + 2] = f(out.pixels[i + 2]);
    }
    return out;
}

}  // namespace

bool looks_like_png(std::string_view bytes) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

PixelImage decode_png(std::string_view bytes) {
    if (!looks_like_png(bytes)) throw ImageDecodeError("not a PNG stream");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageDecodeError("png read init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw ImageDecodeError("png info init failed");
    }

    PixelImage img;
    std::vector<png_bytep> rows;
    Reader reader{reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size(), 0};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageDecodeError("malformed PNG");
    }

    png_set_read_fn(png, &reader, read_fn);
    png_read_info(png, info);

    // Normalize every color type to 8-bit RGBA.
    png_byte color = png_get_color_type(png, info);
    png_byte depth = png_get_bit_depth(png, info);
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
    png_read_update_info(png, info);

    img.width = png_get_image_width(png, info);
    img.height = png_get_image_height(png, info);
    if (img.width == 0 || img.height == 0 ||
        static_cast<std::uint64_t>(img.width) * img.height > 64ull * 1024 * 1024) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageDecodeError("unreasonable PNG dimensions");
    }

    img.pixels.resize(img.pixel_count() * 4);
    rows.resize(img.height);
    for (std::uint32_t y = 0; y < img.height; ++y) {
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 4;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

std::string encode_png(const PixelImage& img) {
    if (img.pixels.size() != img.pixel_count() * 4) {
        throw ImageDecodeError("pixel buffer does not match dimensions");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageDecodeError("png write init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw ImageDecodeError("png info init failed");
    }

    std::string out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ImageDecodeError("png encode failed");
    }

    png_set_write_fn(png, &out, write_fn, flush_fn);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGBA,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_const_bytep> rows(img.height);
    for (std::uint32_t y = 0; y < img.height; ++y) {
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 4;
    }
    png_write_rows(png, const_cast<png_bytepp>(rows.data()),
                   static_cast<png_uint_32>(rows.size()));
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return out;
}

PixelImage lighten(const PixelImage& img) {
    return map_rgb(img, lighten_channel);
}

PixelImage darken(const PixelImage& img) {
    return map_rgb(img, darken_channel);
}

PixelImage grayscale(const PixelImage& img) {
    PixelImage out = img;
    for (std::size_t i = 0; i + 3 < out.pixels.size(); i += 4) {
        double g = 0.299 * out.pixels[i] + 0.587 * out.pixels[i + 1] + 0.114 * out.pixels[i + 2];
        auto v = static_cast<std::uint8_t>(std::lround(g));
        out.pixels[i] = v;
        out.pixels[i + 1] = v;
        out.pixels[i + 2] = v;
    }
    return out;
}

}  // namespace phishforge::image
