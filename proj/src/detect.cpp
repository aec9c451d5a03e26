#include "beaconsim/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beaconsim {

namespace {

template <typename T>
DetectionResult detect_impl(const Plane<T>& img, double k, int window) {
    if (window < 3 || window % 2 == 0)
        throw std::invalid_argument("detector window must be odd and >= 3");
    if (!(k > 0.0)) throw std::invalid_argument("detector k must be positive");

    const int w = img.width, h = img.height;
    DetectionResult result;
    result.map = BinaryMap(w, h);
    if (w == 0 || h == 0) return result;

    // Summed-area tables over I and I^2 (exact in double for 8-bit input).
    const std::size_t sw = static_cast<std::size_t>(w) + 1;
    std::vector<double> sat(sw * (h + 1), 0.0), sat2(sw * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double row = 0.0, row2 = 0.0;
        for (int x = 0; x < w; ++x) {
            const double v = static_cast<double>(img.at(x, y));
            row += v;
            row2 += v * v;
            sat[(y + 1) * sw + (x + 1)] = sat[y * sw + (x + 1)] + row;
            sat2[(y + 1) * sw + (x + 1)] = sat2[y * sw + (x + 1)] + row2;
        }
    }
    const auto rect = [&](const std::vector<double>& s, int x0, int y0, int x1, int y1) {
        // inclusive rectangle [x0,x1] x [y0,y1]
        return s[(y1 + 1) * sw + (x1 + 1)] - s[y0 * sw + (x1 + 1)] - s[(y1 + 1) * sw + x0] +
               s[y0 * sw + x0];
    };

    const int half = window / 2;
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - half), y1 = std::min(h - 1, y + half);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - half), x1 = std::min(w - 1, x + half);
            const double center = static_cast<double>(img.at(x, y));
            const double n = static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1);
            const double sum = rect(sat, x0, y0, x1, y1);
            const double lhs = n * center - sum;
            if (lhs <= 0.0) continue;
            const double sumsq = rect(sat2, x0, y0, x1, y1);
            const double var_n2 = std::max(0.0, n * sumsq - sum * sum);
            if (!(lhs > k * std::sqrt(var_n2))) continue;

            // Strict local maximum with row-major tie-breaking: reject if any
            // vicinity pixel is greater, or equal with a smaller index.
            bool is_max = true;
            for (int yy = y0; yy <= y1 && is_max; ++yy) {
                for (int xx = x0; xx <= x1; ++xx) {
                    if (yy == y && xx == x) continue;
                    const T m = img.at(xx, yy);
                    if (m > img.at(x, y) ||
                        (m == img.at(x, y) && (yy < y || (yy == y && xx < x)))) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (!is_max) continue;
            result.map.mark(x, y);
            result.detections.push_back({x, y, center});
        }
    }

    std::stable_sort(result.detections.begin(), result.detections.end(),
                     [](const Detection& a, const Detection& b) {
                         return a.intensity > b.intensity;  // ties keep row-major order
                     });
    return result;
}

}  // namespace

DetectionResult detect_light_sources(const GrayImage& img, double k, int window) {
    return detect_impl(img, k, window);
}

DetectionResult detect_light_sources(const FloatImage& img, double k, int window) {
    return detect_impl(img, k, window);
}

}  // namespace beaconsim
