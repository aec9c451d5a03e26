#include "beaconsim/image.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace beaconsim {

std::size_t BinaryMap::count() const {
    std::size_t n = 0;
    for (std::uint8_t v : set) n += v != 0;
    return n;
}

namespace {

// Reads one whitespace/comment-delimited token from a PNM header.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw std::runtime_error("truncated PNM header");
    return tok;
}

int parse_dim(const std::string& tok, const char* what) {
    try {
        const int v = std::stoi(tok);
        if (v <= 0) throw std::runtime_error("");
        return v;
    } catch (...) {
        throw std::runtime_error(std::string("bad PNM ") + what + ": " + tok);
    }
}

}  // namespace

void write_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    if (next_token(in) != "P5") throw std::runtime_error("not a binary PGM (P5): " + path);
    const int w = parse_dim(next_token(in), "width");
    const int h = parse_dim(next_token(in), "height");
    const int maxval = parse_dim(next_token(in), "maxval");
    if (maxval != 255) throw std::runtime_error("only 8-bit PGM supported: " + path);
    GrayImage img(w, h);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw std::runtime_error("truncated PGM payload: " + path);
    return img;
}

void write_pbm(const std::string& path, const BinaryMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P4\n" << map.width << " " << map.height << "\n";
    const int row_bytes = (map.width + 7) / 8;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(row_bytes));
    for (int y = 0; y < map.height; ++y) {
        std::fill(row.begin(), row.end(), 0);
        for (int x = 0; x < map.width; ++x) {
            if (map.test(x, y)) row[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
        }
        out.write(reinterpret_cast<const char*>(row.data()), row_bytes);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

BinaryMap read_pbm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    if (next_token(in) != "P4") throw std::runtime_error("not a binary PBM (P4): " + path);
    const int w = parse_dim(next_token(in), "width");
    const int h = parse_dim(next_token(in), "height");
    BinaryMap map(w, h);
    const int row_bytes = (w + 7) / 8;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(row_bytes));
    for (int y = 0; y < h; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), row_bytes);
        if (in.gcount() != row_bytes) throw std::runtime_error("truncated PBM payload: " + path);
        for (int x = 0; x < w; ++x) {
            if (row[x / 8] & (0x80u >> (x % 8))) map.mark(x, y);
        }
    }
    return map;
}

}  // namespace beaconsim
