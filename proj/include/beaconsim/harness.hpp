// Closed-loop simulation driver and deviation-vs-distance metrics.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "beaconsim/config.hpp"
#include "beaconsim/detect.hpp"

namespace beaconsim {

struct TrajectoryRecord {
    double t_s = 0.0;
    double truth_x_m = 0.0, truth_y_m = 0.0, truth_z_m = 0.0;
    double truth_yaw_deg = 0.0;
    double est_x_m = 0.0, est_y_m = 0.0, est_z_m = 0.0;
    double est_yaw_deg = 0.0;
    double err_pos_m = 0.0;   // Euclidean norm of the position error
    double err_yaw_deg = 0.0; // wrapped signed azimuth error
    double ess = 0.0;         // effective sample size after weighting
    double frame_ms = 0.0;    // wall time; the only nondeterministic column
};

struct TrajectoryLog {
    std::vector<TrajectoryRecord> records;
    std::vector<double> divergence_times;  // frames where all weights underflowed
};

struct MetricsRow {
    double band_m = 0.0;
    double max_linear_dev_m = 0.0;
    double max_orient_dev_deg = 0.0;
};

struct MetricsTable {
    std::vector<MetricsRow> rows;
};

/// Per-frame debug taps, invoked after detection.
struct SimHooks {
    std::function<void(int frame, const GrayImage&, const BinaryMap&, const DistanceMap&)>
        on_frame;
};

/// Runs the full pipeline (render, exposure, detect, distance transform,
/// predict, weigh, resample, estimate) over the configured glide.
/// Deterministic for a fixed config and seed.
TrajectoryLog run_simulation(const RunConfig& cfg, const SimHooks* hooks = nullptr);

/// Horizontal distance from each frame's truth position to the touchdown
/// point (z = 0 extrapolation of the last two records).
std::vector<double> distance_to_touchdown(const TrajectoryLog& log);

/// Per band boundary d_i: maxima over frames with distance-to-touchdown
/// <= d_i and > d_{i+1} (the innermost band extends to touchdown). Bands must
/// be descending; a band without frames throws EmptyBand.
MetricsTable compute_metrics(const TrajectoryLog& log, const std::vector<double>& bands_m);

/// Max linear deviation over all frames within distance d of touchdown
/// (the nested-interval variant of the band metric).
double max_deviation_within(const TrajectoryLog& log, double distance_m);

// CSV serialization. Numeric fields round-trip exactly (17 significant
// digits); divergence times ride as "# diverged <t>" lines after the header.
void write_log(const std::string& path, const TrajectoryLog& log);
TrajectoryLog read_log(const std::string& path);  // throws MalformedLog
void write_metrics(const std::string& path, const MetricsTable& table);
std::string format_metrics(const MetricsTable& table);

}  // namespace beaconsim
