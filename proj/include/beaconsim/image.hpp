// Image containers and PGM/PBM file I/O.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace beaconsim {

template <typename T>
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<T> pixels;  // row-major

    Plane() = default;
    Plane(int w, int h, T fill = T{})
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    T& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

using GrayImage = Plane<std::uint8_t>;   // intensities in [0, 255]
using FloatImage = Plane<float>;         // pre-quantization test images

/// Detected light-source centers; dimensions always equal the source image's.
struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> set;  // 0/1, row-major

    BinaryMap() = default;
    BinaryMap(int w, int h) : width(w), height(h), set(static_cast<std::size_t>(w) * h, 0) {}

    bool test(int x, int y) const { return set[static_cast<std::size_t>(y) * width + x] != 0; }
    void mark(int x, int y) { set[static_cast<std::size_t>(y) * width + x] = 1; }
    std::size_t count() const;
};

/// Per-pixel Euclidean distance to the nearest set pixel; max_distance (the
/// image diagonal) everywhere when the map is empty.
struct DistanceMap {
    int width = 0;
    int height = 0;
    std::vector<double> dist;
    double max_distance = 0.0;

    double at(int x, int y) const { return dist[static_cast<std::size_t>(y) * width + x]; }
};

// Binary 8-bit PGM (P5) and bit-packed PBM (P4). Readers throw
// std::runtime_error on malformed input.
void write_pgm(const std::string& path, const GrayImage& img);
GrayImage read_pgm(const std::string& path);
void write_pbm(const std::string& path, const BinaryMap& map);
BinaryMap read_pbm(const std::string& path);

}  // namespace beaconsim
