#include "mckba/block_codec.hpp"

#include <cstdio>

namespace mckba {

std::string to_hex(Word w, unsigned n) {
    const unsigned digits = (n + 3) / 4;
    char buf[24];
    std::snprintf(buf, sizeof buf, "%0*llx", static_cast<int>(digits), static_cast<unsigned long long>(w));
    return std::string("0x") + buf;
}

std::size_t block_count(std::size_t width, std::size_t height, unsigned n) {
    const std::size_t bits = 8 * width * height;
    return (bits + n - 1) / n;
}

BlockStream image_to_blocks(const Image& image, unsigned n) {
    require_word_size(n);
    if (image.width == 0 || image.height == 0 || image.empty())
        throw InvalidInput("image must be non-empty");
    if (image.pixels.size() != image.width * image.height)
        throw InvalidInput("pixel count does not match image dimensions");

    BlockStream out;
    out.n = n;
    out.width = image.width;
    out.height = image.height;
    const std::size_t total_bits = 8 * image.pixels.size();
    out.words.assign(block_count(image.width, image.height, n), 0);
    out.pad_bits = n * out.words.size() - total_bits;

    if (n == 8) {
        for (std::size_t k = 0; k < image.pixels.size(); ++k) out.words[k] = image.pixels[k];
        return out;
    }
    for (std::size_t l = 0; l < total_bits; ++l) {
        const Word bit = (image.pixels[l / 8] >> (l % 8)) & 1u;
        out.words[l / n] |= bit << (l % n);
    }
    return out;
}

Image blocks_to_image(const BlockStream& blocks) {
    require_word_size(blocks.n);
    const unsigned n = blocks.n;
    if (blocks.width == 0 || blocks.height == 0)
        throw InvalidInput("block stream has empty source dimensions");
    const std::size_t total_bits = 8 * blocks.width * blocks.height;
    if (blocks.words.size() != block_count(blocks.width, blocks.height, n))
        throw InvalidInput("word count does not match source dimensions");
    if (blocks.pad_bits != n * blocks.words.size() - total_bits)
        throw InvalidInput("pad_bits inconsistent with word count and dimensions");
    for (Word w : blocks.words)
        if ((w & ~low_mask(n)) != 0) throw InvalidInput("block word exceeds n bits");

    Image img(blocks.width, blocks.height);
    if (n == 8) {
        for (std::size_t k = 0; k < img.pixels.size(); ++k)
            img.pixels[k] = static_cast<std::uint8_t>(blocks.words[k]);
        return img;
    }
    for (std::size_t l = 0; l < total_bits; ++l) {
        const auto bit = static_cast<std::uint8_t>((blocks.words[l / n] >> (l % n)) & 1u);
        img.pixels[l / 8] |= static_cast<std::uint8_t>(bit << (l % 8));
    }
    return img;
}

}  // namespace mckba
