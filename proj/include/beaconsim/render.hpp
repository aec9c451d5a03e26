// Synthetic frame rendering: beacon blobs with inverse-square intensity,
// Poisson clutter, smooth Gaussian background, 8-bit quantization. Also the
// exposure selection rule (largest gain whose saturated components stay small).
#pragma once

#include <cstdint>
#include <functional>

#include "beaconsim/geometry.hpp"
#include "beaconsim/image.hpp"
#include "beaconsim/world.hpp"

namespace beaconsim {

struct SceneRenderConfig {
    double beacon_power = 2.0e7;   // blob peak amplitude at 1 m, intensity units
    double psf_sigma_px = 1.0;     // isotropic Gaussian point-spread sigma
    double background_mean = 20.0;
    double background_sigma = 5.0;  // pointwise sigma of the smooth background field
    double clutter_rate = 5.0;      // expected clutter blobs per frame
    double clutter_power_min = 10.0;  // clutter peak amplitude range (per unit gain)
    double clutter_power_max = 80.0;
    int saturation = 255;
};

/// Renders the beacon scene from truth_pose. Each visible beacon is a Gaussian
/// blob at its projected sub-pixel position with peak
/// exposure_gain * beacon_power / range^2; clutter count is Poisson, positions
/// uniform; the background is a smooth stationary Gaussian field (pointwise
/// N(mean, sigma^2)) unaffected by gain. Values are clamped to
/// [0, saturation]. Deterministic per seed, and the draw sequence does not
/// depend on the gain, so frames at two gains differ only by source scaling.
GrayImage render_frame(const CameraModel& camera, const Pose3& truth_pose,
                       const BeaconMap& beacons, const SceneRenderConfig& cfg,
                       std::uint64_t seed);

/// Area of the largest 8-connected component of pixels at `saturated`.
int max_saturated_component(const GrayImage& img, std::uint8_t saturated = 255);

struct GainBounds {
    double lo = 1.0 / 1024.0;
    double hi = 1024.0;
};

/// Largest gain in bounds (bisection to relative tolerance 1e-3) whose
/// rendered frame keeps every saturated 8-connected component at area
/// <= max_sat_component_px. The probe must be deterministic in the gain.
/// Throws NoFeasibleGain if even bounds.lo violates the constraint.
double auto_exposure(const CameraModel& camera,
                     const std::function<GrayImage(double)>& probe,
                     int max_sat_component_px, GainBounds bounds);

}  // namespace beaconsim
