#include "beaconsim/world.hpp"

#include <cmath>
#include <stdexcept>

#include "beaconsim/mathutil.hpp"
#include "beaconsim/rng.hpp"

namespace beaconsim {

BeaconMap generate_beacon_map(int count, double spacing_m, double runway_width_m) {
    if (count < 4 || count % 2 != 0)
        throw BadLayout("beacon count must be even and at least 4");
    if (!(spacing_m > 0.0)) throw BadLayout("beacon spacing must be positive");
    if (!(runway_width_m > 0.0)) throw BadLayout("runway width must be positive");

    BeaconMap map;
    map.positions.reserve(static_cast<std::size_t>(count));
    const double half = runway_width_m / 2.0;
    for (int i = 0; i < count / 2; ++i) {
        const double x = i * spacing_m;
        map.positions.emplace_back(x, half);
        map.positions.emplace_back(x, -half);
    }
    return map;
}

std::vector<TruthRecord> generate_glide_trajectory(const GlideConfig& cfg) {
    if (!(cfg.glide_angle_deg > 0.0 && cfg.glide_angle_deg < 15.0))
        throw std::invalid_argument("glide angle must be in (0, 15) degrees");
    if (!(cfg.speed_mps > 0.0)) throw std::invalid_argument("speed must be positive");
    if (!(cfg.frame_rate_hz > 0.0)) throw std::invalid_argument("frame rate must be positive");

    const double angle = deg_to_rad(cfg.glide_angle_deg);
    // Ground intersection of the glide line; equals the threshold when the
    // angle matches atan(altitude / distance).
    const double x_td = cfg.start_distance_m - cfg.start_altitude_m / std::tan(angle);
    const Eigen::Vector2d start_xy(cfg.start_distance_m, cfg.lateral_offset_m);
    const Eigen::Vector2d end_xy(x_td, 0.0);
    const double ground_track = (end_xy - start_xy).norm();
    const Eigen::Vector2d ground_dir = (end_xy - start_xy) / ground_track;
    const double course_deg = rad_to_deg(std::atan2(ground_dir.y(), ground_dir.x()));

    const double v_horiz = cfg.speed_mps * std::cos(angle);
    const double v_vert = cfg.speed_mps * std::sin(angle);
    const double dt = 1.0 / cfg.frame_rate_hz;

    std::vector<TruthRecord> out;
    for (int k = 0;; ++k) {
        const double t = k * dt;
        const double z = cfg.start_altitude_m - v_vert * t;
        if (z <= 0.5) break;
        const Eigen::Vector2d xy = start_xy + ground_dir * (v_horiz * t);
        const double to_go_ratio = (ground_track - v_horiz * t) / ground_track;
        const double yaw = wrap_deg(course_deg + cfg.heading_offset_deg * to_go_ratio);
        TruthRecord rec;
        rec.t_s = t;
        rec.pose = Pose3(rotation_zyx(yaw, cfg.glide_angle_deg, 0.0),
                         Eigen::Vector3d(xy.x(), xy.y(), z));
        rec.speed_mps = cfg.speed_mps;
        out.push_back(rec);
    }
    return out;
}

std::vector<ImuSample> synthesize_imu(const std::vector<TruthRecord>& truth,
                                      double yaw_sigma_deg, double yaw_bias_deg,
                                      double attitude_sigma_deg, std::uint64_t seed) {
    if (yaw_sigma_deg < 0.0 || attitude_sigma_deg < 0.0)
        throw std::invalid_argument("IMU noise sigmas must be nonnegative");

    Rng rng(seed);
    std::vector<ImuSample> out;
    out.reserve(truth.size());
    double walk = 0.0;
    bool first = true;
    for (const TruthRecord& rec : truth) {
        const EulerZyx e = euler_from_rotation(rec.pose.rotation());
        if (!first) walk += rng.normal(0.0, yaw_sigma_deg);
        first = false;
        ImuSample s;
        s.t_s = rec.t_s;
        s.roll_deg = e.roll_deg + rng.normal(0.0, attitude_sigma_deg);
        s.pitch_deg = e.pitch_deg + rng.normal(0.0, attitude_sigma_deg);
        s.yaw_deg = e.yaw_deg + yaw_bias_deg + walk;
        out.push_back(s);
    }
    return out;
}

}  // namespace beaconsim
