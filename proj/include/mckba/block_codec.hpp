#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mckba/bits.hpp"

namespace mckba {

// 8-bit grayscale image, pixels in row-major raster order.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), pixels(w * h, fill) {}

    std::size_t size() const noexcept { return pixels.size(); }
    bool empty() const noexcept { return pixels.empty(); }
    bool same_shape(const Image& other) const noexcept {
        return width == other.width && height == other.height;
    }
    friend bool operator==(const Image&, const Image&) = default;
};

// An image as the n-bit word sequence the cipher works on.
//
// Bit l of the stream is bit (l mod 8) of pixel floor(l / 8); word k holds
// stream bits n*k .. n*k+n-1 with bit n*k+j at weight 2^j. The tail of the
// last word is zero padding when n does not divide 8*M*N.
struct BlockStream {
    unsigned n = 0;
    std::vector<Word> words;
    std::size_t pad_bits = 0;
    std::size_t width = 0;
    std::size_t height = 0;

    std::size_t size() const noexcept { return words.size(); }
    friend bool operator==(const BlockStream&, const BlockStream&) = default;
};

std::size_t block_count(std::size_t width, std::size_t height, unsigned n);

BlockStream image_to_blocks(const Image& image, unsigned n);
Image blocks_to_image(const BlockStream& blocks);

// Binary PGM ("P5", maxval 255) only.
Image read_pgm(std::istream& in);
Image read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const Image& image);
void write_pgm(const std::filesystem::path& path, const Image& image);

}  // namespace mckba
