#include "beaconsim/distance_transform.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace beaconsim {

namespace {

// 1D squared-distance transform of sampled function f (finite values), lower
// envelope of parabolas (Felzenszwalb & Huttenlocher).
void envelope_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                 std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            const int p = v[k];
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p);
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        d[q] = (q - p) * static_cast<double>(q - p) + f[p];
    }
}

}  // namespace

DistanceMap distance_transform(const BinaryMap& m) {
    DistanceMap out;
    out.width = m.width;
    out.height = m.height;
    out.max_distance = std::hypot(static_cast<double>(m.width), static_cast<double>(m.height));
    out.dist.assign(static_cast<std::size_t>(m.width) * m.height, out.max_distance);
    if (m.width == 0 || m.height == 0) return out;
    if (m.count() == 0) return out;

    const int w = m.width, h = m.height;
    // Columns with no set pixel get a sentinel larger than any real distance,
    // so their parabolas never win in pass 2.
    const int far = w + h + 1;

    // Pass 1: per column, vertical distance to the nearest set pixel
    // (two linear sweeps), stored squared.
    std::vector<double> colsq(static_cast<std::size_t>(w) * h);
    {
        std::vector<int> dy(static_cast<std::size_t>(h));
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y) {
                dy[y] = m.test(x, y) ? 0 : (y > 0 ? std::min(far, dy[y - 1] + 1) : far);
            }
            for (int y = h - 2; y >= 0; --y) dy[y] = std::min(dy[y], dy[y + 1] + 1);
            for (int y = 0; y < h; ++y)
                colsq[static_cast<std::size_t>(y) * w + x] = static_cast<double>(dy[y]) * dy[y];
        }
    }

    // Pass 2: per row, lower envelope over squared horizontal offsets.
    {
        std::vector<double> f(static_cast<std::size_t>(w));
        std::vector<double> d(static_cast<std::size_t>(w));
        std::vector<int> v(static_cast<std::size_t>(w));
        std::vector<double> z(static_cast<std::size_t>(w) + 1);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) f[x] = colsq[static_cast<std::size_t>(y) * w + x];
            envelope_1d(f, d, v, z);
            for (int x = 0; x < w; ++x)
                out.dist[static_cast<std::size_t>(y) * w + x] = std::sqrt(d[x]);
        }
    }
    return out;
}

}  // namespace beaconsim
