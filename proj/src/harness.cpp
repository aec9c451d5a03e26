#include "beaconsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "beaconsim/distance_transform.hpp"
#include "beaconsim/mathutil.hpp"
#include "beaconsim/rng.hpp"

namespace beaconsim {

namespace {

constexpr char kLogHeader[] =
    "t_s,truth_x_m,truth_y_m,truth_z_m,truth_yaw_deg,est_x_m,est_y_m,est_z_m,est_yaw_deg,"
    "err_pos_m,err_yaw_deg,ess,frame_ms";

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Exposure gain from the filter's own pose estimate: aims target_peak at the
// geometric mean range of the beacons predicted visible, balancing detectable
// far blobs against small saturated plateaus on near ones.
double scheduled_gain(const ExposureConfig& exp_cfg, const SceneRenderConfig& render,
                      const CameraModel& camera, const StateVector& est_state,
                      const ImuSample& imu, const BeaconMap& beacons, double previous_gain) {
    double near2 = std::numeric_limits<double>::max();
    double far2 = 0.0;
    try {
        const Homography hom = make_homography(camera, pose_from_state(est_state, imu));
        const std::vector<ImagePoint> pts = project_beacons(hom, beacons.positions, camera);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!pts[i].visible) continue;
            const Eigen::Vector3d b3(beacons.positions[i].x(), beacons.positions[i].y(), 0.0);
            const double r2 = (est_state.translation - b3).squaredNorm();
            near2 = std::min(near2, r2);
            far2 = std::max(far2, r2);
        }
    } catch (const DegeneratePose&) {
        return previous_gain;
    }
    if (far2 <= 0.0) return previous_gain;  // nothing predicted visible
    near2 = std::max(near2, 100.0);
    const double gain = exp_cfg.target_peak * std::sqrt(near2 * far2) / render.beacon_power;
    return std::clamp(gain, exp_cfg.gain_min, exp_cfg.gain_max);
}

}  // namespace

TrajectoryLog run_simulation(const RunConfig& cfg, const SimHooks* hooks) {
    cfg.validate();
    const BeaconMap beacons =
        generate_beacon_map(cfg.beacons.count, cfg.beacons.spacing_m, cfg.beacons.runway_width_m);
    const std::vector<TruthRecord> truth = generate_glide_trajectory(cfg.glide);
    const std::vector<ImuSample> imu =
        synthesize_imu(truth, cfg.imu.yaw_walk_sigma_deg, cfg.imu.yaw_bias_deg,
                       cfg.imu.attitude_sigma_deg, derive_seed(cfg.seed, "imu"));

    CameraModel camera = cfg.camera.to_model();
    camera.validate();

    // Navigation prior: mean = truth plus a per-run error drawn at the prior
    // sigmas (scaled), spread = the prior sigmas.
    InitPrior prior = cfg.filter.prior;
    {
        const TruthRecord& t0 = truth.front();
        const EulerZyx e0 = euler_from_rotation(t0.pose.rotation());
        Rng offset_rng(derive_seed(cfg.seed, "init-offset"));
        const double s = cfg.filter.init_offset_scale;
        StateVector mean;
        mean.translation = t0.pose.translation() +
                           Eigen::Vector3d(offset_rng.normal(0.0, s * prior.planar_sigma_m),
                                           offset_rng.normal(0.0, s * prior.planar_sigma_m),
                                           offset_rng.normal(0.0, s * prior.elevation_sigma_m));
        mean.yaw_deg = wrap_deg(e0.yaw_deg + offset_rng.normal(0.0, s * prior.azimuth_sigma_deg));
        // Course and speed are known to the navigation system's short-term
        // accuracy; the prior's direction/speed sigmas model that spread.
        const Eigen::Vector3d fwd = truth.size() > 1
                                        ? (truth[1].pose.translation() - t0.pose.translation())
                                              .normalized()
                                        : direction_from_angles(e0.yaw_deg, 0.0);
        mean.dir_azimuth_deg = rad_to_deg(std::atan2(fwd.y(), fwd.x()));
        mean.dir_pitch_deg = rad_to_deg(std::asin(std::clamp(-fwd.z(), -1.0, 1.0)));
        mean.speed_mps = t0.speed_mps;
        prior.mean_state = mean;
    }
    ParticleSet particles =
        init_particles(prior, cfg.filter.n_particles, derive_seed(cfg.seed, "filter-init"));

    TrajectoryLog log;
    log.records.reserve(truth.size());
    double gain = cfg.camera.gain;
    StateVector est_state = prior.mean_state;

    for (std::size_t k = 0; k < truth.size(); ++k) {
        const auto t_start = std::chrono::steady_clock::now();
        const TruthRecord& rec = truth[k];

        switch (cfg.exposure.mode) {
            case ExposureConfig::Mode::kFixed:
                gain = cfg.camera.gain;
                break;
            case ExposureConfig::Mode::kSchedule:
                gain = scheduled_gain(cfg.exposure, cfg.render, camera, est_state, imu[k],
                                      beacons, gain);
                break;
            case ExposureConfig::Mode::kSearch: {
                const std::uint64_t frame_seed = derive_seed(cfg.seed, "render", k);
                CameraModel probe_cam = camera;
                gain = auto_exposure(
                    camera,
                    [&](double g) {
                        probe_cam.exposure_gain = g;
                        return render_frame(probe_cam, rec.pose, beacons, cfg.render, frame_seed);
                    },
                    cfg.exposure.max_sat_component_px,
                    GainBounds{cfg.exposure.gain_min, cfg.exposure.gain_max});
                break;
            }
        }
        camera.exposure_gain = gain;

        const GrayImage img =
            render_frame(camera, rec.pose, beacons, cfg.render, derive_seed(cfg.seed, "render", k));
        const DetectionResult det =
            detect_light_sources(img, cfg.detector.k, cfg.detector.window_px);
        const DistanceMap dmap = distance_transform(det.map);
        if (hooks && hooks->on_frame) hooks->on_frame(static_cast<int>(k), img, det.map, dmap);

        if (k > 0) {
            const double yaw_delta = angle_diff_deg(imu[k].yaw_deg, imu[k - 1].yaw_deg);
            const double dt = imu[k].t_s - imu[k - 1].t_s;
            particles = predict(particles, yaw_delta, dt, cfg.filter.process_noise,
                                derive_seed(cfg.seed, "predict", k));
        }
        WeighResult weighed =
            weigh(particles, dmap, camera, imu[k], beacons, cfg.filter.weight);
        if (weighed.diverged) log.divergence_times.push_back(rec.t_s);
        const double ess = effective_sample_size(weighed.particles);
        particles = resample(weighed.particles, derive_seed(cfg.seed, "resample", k));
        const auto [est, summary] = estimate(particles);
        est_state = est;

        const EulerZyx truth_euler = euler_from_rotation(rec.pose.rotation());
        TrajectoryRecord out;
        out.t_s = rec.t_s;
        out.truth_x_m = rec.pose.translation().x();
        out.truth_y_m = rec.pose.translation().y();
        out.truth_z_m = rec.pose.translation().z();
        out.truth_yaw_deg = truth_euler.yaw_deg;
        out.est_x_m = est.translation.x();
        out.est_y_m = est.translation.y();
        out.est_z_m = est.translation.z();
        out.est_yaw_deg = est.yaw_deg;
        out.err_pos_m = (est.translation - rec.pose.translation()).norm();
        out.err_yaw_deg = angle_diff_deg(est.yaw_deg, truth_euler.yaw_deg);
        out.ess = ess;
        out.frame_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();
        log.records.push_back(out);
    }
    return log;
}

std::vector<double> distance_to_touchdown(const TrajectoryLog& log) {
    std::vector<double> out(log.records.size(), 0.0);
    if (log.records.empty()) return out;
    // Touchdown: z = 0 linear extrapolation of the last two records.
    const TrajectoryRecord& last = log.records.back();
    Eigen::Vector2d td(last.truth_x_m, last.truth_y_m);
    if (log.records.size() >= 2) {
        const TrajectoryRecord& prev = log.records[log.records.size() - 2];
        const double dz = prev.truth_z_m - last.truth_z_m;
        if (dz > 0.0) {
            const double steps = last.truth_z_m / dz;
            td.x() += (last.truth_x_m - prev.truth_x_m) * steps;
            td.y() += (last.truth_y_m - prev.truth_y_m) * steps;
        }
    }
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        out[i] = std::hypot(log.records[i].truth_x_m - td.x(),
                            log.records[i].truth_y_m - td.y());
    }
    return out;
}

MetricsTable compute_metrics(const TrajectoryLog& log, const std::vector<double>& bands_m) {
    if (log.records.empty()) throw std::invalid_argument("compute_metrics: empty log");
    for (std::size_t i = 1; i < bands_m.size(); ++i) {
        if (!(bands_m[i] < bands_m[i - 1]))
            throw std::invalid_argument("compute_metrics: bands must be strictly descending");
    }
    const std::vector<double> dist = distance_to_touchdown(log);
    MetricsTable table;
    for (std::size_t b = 0; b < bands_m.size(); ++b) {
        const double upper = bands_m[b];
        const double lower = b + 1 < bands_m.size() ? bands_m[b + 1] : 0.0;
        MetricsRow row;
        row.band_m = upper;
        bool any = false;
        for (std::size_t i = 0; i < log.records.size(); ++i) {
            const bool in_band = b + 1 < bands_m.size() ? (dist[i] <= upper && dist[i] > lower)
                                                        : (dist[i] <= upper);
            if (!in_band) continue;
            any = true;
            row.max_linear_dev_m = std::max(row.max_linear_dev_m, log.records[i].err_pos_m);
            row.max_orient_dev_deg =
                std::max(row.max_orient_dev_deg, std::abs(log.records[i].err_yaw_deg));
        }
        if (!any)
            throw EmptyBand("no frames within band " + fmt17(upper) + " m");
        table.rows.push_back(row);
    }
    return table;
}

double max_deviation_within(const TrajectoryLog& log, double distance_m) {
    const std::vector<double> dist = distance_to_touchdown(log);
    double best = 0.0;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        if (dist[i] <= distance_m) best = std::max(best, log.records[i].err_pos_m);
    }
    return best;
}

void write_log(const std::string& path, const TrajectoryLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << kLogHeader << "\n";
    for (double t : log.divergence_times) out << "# diverged " << fmt17(t) << "\n";
    for (const TrajectoryRecord& r : log.records) {
        out << fmt17(r.t_s) << ',' << fmt17(r.truth_x_m) << ',' << fmt17(r.truth_y_m) << ','
            << fmt17(r.truth_z_m) << ',' << fmt17(r.truth_yaw_deg) << ',' << fmt17(r.est_x_m)
            << ',' << fmt17(r.est_y_m) << ',' << fmt17(r.est_z_m) << ',' << fmt17(r.est_yaw_deg)
            << ',' << fmt17(r.err_pos_m) << ',' << fmt17(r.err_yaw_deg) << ',' << fmt17(r.ess)
            << ',' << fmt17(r.frame_ms) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

TrajectoryLog read_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedLog("cannot open: " + path, 0);
    TrajectoryLog log;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw MalformedLog("missing header", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kLogHeader) throw MalformedLog("unexpected header", line_no);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# diverged ", 0) == 0) {
            try {
                log.divergence_times.push_back(std::stod(line.substr(11)));
            } catch (...) {
                throw MalformedLog("bad divergence marker", line_no);
            }
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        double values[13];
        for (int i = 0; i < 13; ++i) {
            if (!std::getline(ss, field, ',')) throw MalformedLog("too few columns", line_no);
            std::size_t pos = 0;
            try {
                values[i] = std::stod(field, &pos);
            } catch (...) {
                throw MalformedLog("bad number '" + field + "'", line_no);
            }
            if (pos != field.size()) throw MalformedLog("bad number '" + field + "'", line_no);
        }
        if (std::getline(ss, field, ',')) throw MalformedLog("too many columns", line_no);
        TrajectoryRecord r;
        r.t_s = values[0];
        r.truth_x_m = values[1];
        r.truth_y_m = values[2];
        r.truth_z_m = values[3];
        r.truth_yaw_deg = values[4];
        r.est_x_m = values[5];
        r.est_y_m = values[6];
        r.est_z_m = values[7];
        r.est_yaw_deg = values[8];
        r.err_pos_m = values[9];
        r.err_yaw_deg = values[10];
        r.ess = values[11];
        r.frame_ms = values[12];
        log.records.push_back(r);
    }
    return log;
}

std::string format_metrics(const MetricsTable& table) {
    std::string out = "band_m,max_linear_dev_m,max_orient_dev_deg\n";
    for (const MetricsRow& r : table.rows) {
        out += fmt17(r.band_m) + "," + fmt17(r.max_linear_dev_m) + "," +
               fmt17(r.max_orient_dev_deg) + "\n";
    }
    return out;
}

void write_metrics(const std::string& path, const MetricsTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << format_metrics(table);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace beaconsim
