// Particle filter over the UAV state: initialization from navigation priors,
// IMU-driven prediction, distance-map weighting, systematic resampling, and
// weighted state estimation.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "beaconsim/geometry.hpp"
#include "beaconsim/image.hpp"
#include "beaconsim/world.hpp"

namespace beaconsim {

/// UAV hypothesis: world translation, heading, velocity-direction angles and
/// speed. Angles in degrees, normalized to (-180, 180].
struct StateVector {
    Eigen::Vector3d translation{0.0, 0.0, 0.0};  // meters
    double yaw_deg = 0.0;                        // heading azimuth
    double dir_azimuth_deg = 0.0;                // movement-direction azimuth
    double dir_pitch_deg = 0.0;                  // movement-direction pitch (positive descends)
    double speed_mps = 0.0;
};

struct Particle {
    StateVector state;
    double weight = 0.0;
};

struct ParticleSet {
    std::vector<Particle> particles;
    std::size_t size() const { return particles.size(); }
};

struct InitPrior {
    double planar_sigma_m = 100.0;
    double elevation_sigma_m = 10.0;
    double azimuth_sigma_deg = 3.0;
    double direction_sigma_deg = 1.0;  // spread on the movement-direction angles
    double speed_sigma_frac = 0.05;    // spread on speed, fraction of the mean speed
    StateVector mean_state;
};

/// Distance-score parameters. Each projected beacon contributes
/// d / (d + P)^q; the per-particle factor is exp(exponent_sign * sum).
/// With exponent_sign = -1 (default) a zero distance is optimal. For q > 1
/// the per-beacon penalty d/(d+P)^q peaks at d* = P/(q-1) and decays beyond
/// it; for q <= 1 it grows monotonically over all d >= 0.
struct WeightParams {
    double p_px = 4.0;
    double q = 1.0;
    double offscreen_distance_px = 16.0;  // charged for non-visible projections
    double exponent_sign = -1.0;          // +1 selects the unflipped variant for study
};

struct ProcessNoise {
    double yaw_sigma_deg = 0.2;
    double dir_azimuth_sigma_deg = 0.3;
    double dir_pitch_sigma_deg = 0.3;
    double speed_sigma_mps = 0.3;
};

/// Unit movement-direction vector for azimuth/pitch (degrees).
Eigen::Vector3d direction_from_angles(double azimuth_deg, double pitch_deg);

/// UAV pose from a hypothesis: translation and yaw from the state, pitch and
/// roll from the IMU sample.
Pose3 pose_from_state(const StateVector& state, const ImuSample& imu);

/// n Gaussian samples around mean_state with the prior sigmas
/// (planar, planar, elevation) on translation and azimuth on yaw; uniform
/// weights 1/n.
ParticleSet init_particles(const InitPrior& prior, int n, std::uint64_t seed);

/// Per particle: yaw += imu_yaw_delta + noise; direction angles and speed get
/// their own noise (speed clamped >= 0); then translation advances along the
/// movement direction by speed * dt. Weights untouched.
ParticleSet predict(const ParticleSet& ps, double imu_yaw_delta_deg, double dt_s,
                    const ProcessNoise& noise, std::uint64_t seed);

/// Per-particle distance-score factor exp(exponent_sign * sum d/(d+P)^q).
double weight_factor(std::span<const double> distances, const WeightParams& wp);

struct WeighResult {
    ParticleSet particles;
    bool diverged = false;  // every weight underflowed; reset to uniform
};

/// Projects all beacons per particle, reads the distance map at the rounded
/// pixel of each visible projection (offscreen_distance for the rest),
/// multiplies the prior weight by the distance-score factor, and normalizes.
WeighResult weigh(const ParticleSet& ps, const DistanceMap& dmap, const CameraModel& camera,
                  const ImuSample& imu, const BeaconMap& beacons, const WeightParams& wp);

double effective_sample_size(const ParticleSet& ps);

/// Systematic resampling, triggered only when ESS < N/2; output weights are
/// uniform. Untriggered calls return the set unchanged.
ParticleSet resample(const ParticleSet& ps, std::uint64_t seed);

struct EstimateSummary {
    Eigen::Matrix3d position_covariance = Eigen::Matrix3d::Zero();
    double yaw_circular_variance = 0.0;  // 1 - |mean resultant|
};

/// Weighted mean state (circular mean for yaw) plus spread summary.
std::pair<StateVector, EstimateSummary> estimate(const ParticleSet& ps);

}  // namespace beaconsim
