#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "mckba/block_codec.hpp"

namespace mckba {

namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
    for (;;) {
        const int ch = in.peek();
        if (ch == '#') {
            std::string discard;
            std::getline(in, discard);
        } else if (ch != EOF && std::isspace(ch)) {
            in.get();
        } else {
            return;
        }
    }
}

std::size_t read_header_value(std::istream& in, const char* field) {
    skip_separators(in);
    std::size_t value = 0;
    bool any = false;
    while (std::isdigit(in.peek())) {
        value = value * 10 + static_cast<std::size_t>(in.get() - '0');
        any = true;
        if (value > (std::size_t{1} << 31)) throw InvalidInput(std::string("PGM ") + field + " out of range");
    }
    if (!any) throw InvalidInput(std::string("PGM header: missing ") + field);
    return value;
}

}  // namespace

Image read_pgm(std::istream& in) {
    char magic[2] = {};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') throw InvalidInput("not a binary PGM (P5) file");

    const std::size_t width = read_header_value(in, "width");
    const std::size_t height = read_header_value(in, "height");
    const std::size_t maxval = read_header_value(in, "maxval");
    if (width == 0 || height == 0) throw InvalidInput("PGM has zero dimension");
    if (maxval != 255) throw InvalidInput("only 8-bit PGM (maxval 255) is supported");
    // exactly one whitespace byte separates the header from the raster
    if (!std::isspace(in.get())) throw InvalidInput("malformed PGM header");

    Image img(width, height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) throw InvalidInput("truncated PGM raster");
    return img;
}

Image read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string());
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const Image& image) {
    if (image.width == 0 || image.height == 0 || image.pixels.size() != image.width * image.height)
        throw InvalidInput("cannot write an empty or malformed image");
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot create " + path.string());
    write_pgm(out, image);
    if (!out) throw InvalidInput("write failed: " + path.string());
}

}  // namespace mckba
