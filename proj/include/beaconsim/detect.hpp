// Faint light-source detection: strict local maxima that exceed the local
// vicinity statistics by k standard deviations.
#pragma once

#include <vector>

#include "beaconsim/image.hpp"

namespace beaconsim {

struct Detection {
    int u = 0;  // column
    int v = 0;  // row
    double intensity = 0.0;
};

struct DetectionResult {
    BinaryMap map;                      // detection centers, one pixel per source
    std::vector<Detection> detections;  // sorted by intensity descending
};

/// A pixel p is detected iff
///   (a) it is a strict local maximum over its window x window vicinity N
///       (ties broken by lowest row-major index, so a flat plateau yields one
///       detection), and
///   (b) I_p exceeds mean(N) + k * stddev(N), evaluated in the
///       cross-multiplied form  n*I_p - S > k*sqrt(n*Q - S^2)
///       (exact for integer-valued images; sigma = 0 vicinities never fire).
/// The vicinity includes p and is clipped at the borders. window must be odd
/// and >= 3.
DetectionResult detect_light_sources(const GrayImage& img, double k = 2.5, int window = 7);
DetectionResult detect_light_sources(const FloatImage& img, double k = 2.5, int window = 7);

}  // namespace beaconsim
