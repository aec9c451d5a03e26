#include "beaconsim/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beaconsim/mathutil.hpp"
#include "beaconsim/rng.hpp"

namespace beaconsim {

Eigen::Vector3d direction_from_angles(double azimuth_deg, double pitch_deg) {
    const double az = deg_to_rad(azimuth_deg), p = deg_to_rad(pitch_deg);
    return {std::cos(p) * std::cos(az), std::cos(p) * std::sin(az), -std::sin(p)};
}

Pose3 pose_from_state(const StateVector& state, const ImuSample& imu) {
    return Pose3(rotation_zyx(state.yaw_deg, imu.pitch_deg, imu.roll_deg), state.translation);
}

ParticleSet init_particles(const InitPrior& prior, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("particle count must be >= 1");
    Rng rng(seed);
    ParticleSet ps;
    ps.particles.resize(static_cast<std::size_t>(n));
    const double w0 = 1.0 / n;
    for (Particle& p : ps.particles) {
        StateVector s = prior.mean_state;
        s.translation.x() += rng.normal(0.0, prior.planar_sigma_m);
        s.translation.y() += rng.normal(0.0, prior.planar_sigma_m);
        s.translation.z() += rng.normal(0.0, prior.elevation_sigma_m);
        s.yaw_deg = wrap_deg(s.yaw_deg + rng.normal(0.0, prior.azimuth_sigma_deg));
        s.dir_azimuth_deg = wrap_deg(s.dir_azimuth_deg + rng.normal(0.0, prior.direction_sigma_deg));
        s.dir_pitch_deg = wrap_deg(s.dir_pitch_deg + rng.normal(0.0, prior.direction_sigma_deg));
        s.speed_mps = std::max(
            0.0, s.speed_mps + rng.normal(0.0, prior.speed_sigma_frac * prior.mean_state.speed_mps));
        p.state = s;
        p.weight = w0;
    }
    return ps;
}

ParticleSet predict(const ParticleSet& ps, double imu_yaw_delta_deg, double dt_s,
                    const ProcessNoise& noise, std::uint64_t seed) {
    if (dt_s < 0.0) throw std::invalid_argument("dt must be nonnegative");
    Rng rng(seed);
    ParticleSet out = ps;
    for (Particle& p : out.particles) {
        StateVector& s = p.state;
        s.yaw_deg = wrap_deg(s.yaw_deg + imu_yaw_delta_deg + rng.normal(0.0, noise.yaw_sigma_deg));
        s.dir_azimuth_deg = wrap_deg(s.dir_azimuth_deg + rng.normal(0.0, noise.dir_azimuth_sigma_deg));
        s.dir_pitch_deg = wrap_deg(s.dir_pitch_deg + rng.normal(0.0, noise.dir_pitch_sigma_deg));
        s.speed_mps = std::max(0.0, s.speed_mps + rng.normal(0.0, noise.speed_sigma_mps));
        s.translation += direction_from_angles(s.dir_azimuth_deg, s.dir_pitch_deg) *
                         (s.speed_mps * dt_s);
    }
    return out;
}

double weight_factor(std::span<const double> distances, const WeightParams& wp) {
    double score = 0.0;
    if (wp.q == 1.0) {
        for (double d : distances) score += d / (d + wp.p_px);
    } else {
        for (double d : distances) score += d / std::pow(d + wp.p_px, wp.q);
    }
    return std::exp(wp.exponent_sign * score);
}

WeighResult weigh(const ParticleSet& ps, const DistanceMap& dmap, const CameraModel& camera,
                  const ImuSample& imu, const BeaconMap& beacons, const WeightParams& wp) {
    if (beacons.positions.empty()) throw std::invalid_argument("weigh: empty beacon map");
    if (dmap.width != camera.width || dmap.height != camera.height)
        throw std::invalid_argument("weigh: distance map size does not match the camera");

    const HomographyBuilder builder(camera);
    WeighResult result;
    result.particles = ps;

    std::vector<double> dists(beacons.positions.size());
    double total = 0.0;
    for (Particle& p : result.particles.particles) {
        bool degenerate = false;
        Homography hom;
        try {
            hom = builder.for_uav_pose(pose_from_state(p.state, imu));
        } catch (const DegeneratePose&) {
            degenerate = true;  // hypothesis on the ground plane: nothing projects
        }
        if (degenerate) {
            std::fill(dists.begin(), dists.end(), wp.offscreen_distance_px);
        } else {
            const std::vector<ImagePoint> pts =
                project_beacons(hom, beacons.positions, camera);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (!pts[i].visible) {
                    dists[i] = wp.offscreen_distance_px;
                    continue;
                }
                const int x = std::clamp(static_cast<int>(std::lround(pts[i].u)), 0,
                                         dmap.width - 1);
                const int y = std::clamp(static_cast<int>(std::lround(pts[i].v)), 0,
                                         dmap.height - 1);
                dists[i] = dmap.at(x, y);
            }
        }
        p.weight *= weight_factor(dists, wp);
        total += p.weight;
    }

    if (!(total > 0.0) || !std::isfinite(total)) {
        const double w0 = 1.0 / static_cast<double>(result.particles.size());
        for (Particle& p : result.particles.particles) p.weight = w0;
        result.diverged = true;
        return result;
    }
    for (Particle& p : result.particles.particles) p.weight /= total;
    return result;
}

double effective_sample_size(const ParticleSet& ps) {
    double sumsq = 0.0;
    for (const Particle& p : ps.particles) sumsq += p.weight * p.weight;
    return sumsq > 0.0 ? 1.0 / sumsq : 0.0;
}

ParticleSet resample(const ParticleSet& ps, std::uint64_t seed) {
    const std::size_t n = ps.size();
    if (n == 0) return ps;
    if (effective_sample_size(ps) >= static_cast<double>(n) / 2.0) return ps;

    Rng rng(seed);
    ParticleSet out;
    out.particles.reserve(n);
    const double step = 1.0 / static_cast<double>(n);
    double position = rng.uniform01() * step;
    double cumulative = ps.particles[0].weight;
    std::size_t i = 0;
    const double w0 = step;
    for (std::size_t k = 0; k < n; ++k) {
        while (cumulative < position && i + 1 < n) {
            ++i;
            cumulative += ps.particles[i].weight;
        }
        Particle p = ps.particles[i];
        p.weight = w0;
        out.particles.push_back(p);
        position += step;
    }
    return out;
}

std::pair<StateVector, EstimateSummary> estimate(const ParticleSet& ps) {
    if (ps.size() == 0) throw std::invalid_argument("estimate: empty particle set");
    StateVector mean;
    Eigen::Vector3d t_mean = Eigen::Vector3d::Zero();
    double cos_sum = 0.0, sin_sum = 0.0;
    double dir_az = 0.0, dir_pitch = 0.0, speed = 0.0;
    for (const Particle& p : ps.particles) {
        t_mean += p.weight * p.state.translation;
        cos_sum += p.weight * std::cos(deg_to_rad(p.state.yaw_deg));
        sin_sum += p.weight * std::sin(deg_to_rad(p.state.yaw_deg));
        dir_az += p.weight * p.state.dir_azimuth_deg;
        dir_pitch += p.weight * p.state.dir_pitch_deg;
        speed += p.weight * p.state.speed_mps;
    }
    mean.translation = t_mean;
    mean.yaw_deg = wrap_deg(rad_to_deg(std::atan2(sin_sum, cos_sum)));
    mean.dir_azimuth_deg = wrap_deg(dir_az);
    mean.dir_pitch_deg = wrap_deg(dir_pitch);
    mean.speed_mps = speed;

    EstimateSummary summary;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Particle& p : ps.particles) {
        const Eigen::Vector3d d = p.state.translation - t_mean;
        cov += p.weight * (d * d.transpose());
    }
    summary.position_covariance = cov;
    summary.yaw_circular_variance = 1.0 - std::hypot(cos_sum, sin_sum);
    return {mean, summary};
}

}  // namespace beaconsim
