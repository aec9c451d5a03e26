// Beacon layout, ground-truth glide trajectory, and synthesized IMU streams.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "beaconsim/geometry.hpp"

namespace beaconsim {

/// Ordered ground-plane beacon positions (meters, all at z = 0).
struct BeaconMap {
    std::vector<Eigen::Vector2d> positions;
};

/// Two straight lines of count/2 beacons each along the runway sides:
/// x in {0, spacing, ..., (count/2 - 1) * spacing}, y = +/- runway_width / 2.
/// Throws BadLayout unless count is even and >= 4 and spacing, width > 0.
BeaconMap generate_beacon_map(int count, double spacing_m, double runway_width_m);

struct GlideConfig {
    double start_distance_m = 1000.0;  // along-runway distance from the threshold
    double start_altitude_m = 60.0;
    double glide_angle_deg = 3.4336313;  // ~atan(60/1000): aim point is the threshold
    double speed_mps = 30.0;
    double frame_rate_hz = 10.0;
    double lateral_offset_m = 5.0;    // initial cross-track error, decays to 0
    double heading_offset_deg = 2.0;  // initial heading error, decays to 0
};

struct ImuSample {
    double t_s = 0.0;
    double roll_deg = 0.0;
    double pitch_deg = 0.0;
    double yaw_deg = 0.0;
};

struct TruthRecord {
    double t_s = 0.0;
    Pose3 pose;
    double speed_mps = 0.0;
};

/// Straight-line descent at glide_angle toward the threshold at constant
/// speed, sampled at frame_rate; the initial lateral and heading offsets decay
/// linearly to zero at the ground-intersection point. Ends when altitude
/// drops to 0.5 m.
std::vector<TruthRecord> generate_glide_trajectory(const GlideConfig& cfg);

/// Per-record samples: roll/pitch = truth + white Gaussian(0, attitude_sigma);
/// yaw = truth + yaw_bias + random walk with per-step sigma yaw_sigma.
/// Deterministic for a fixed seed.
std::vector<ImuSample> synthesize_imu(const std::vector<TruthRecord>& truth,
                                      double yaw_sigma_deg, double yaw_bias_deg,
                                      double attitude_sigma_deg, std::uint64_t seed);

}  // namespace beaconsim
