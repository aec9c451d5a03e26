// Run configuration: flat `section.key_with_units = value` text files.
// Every key has a default; an empty file (or missing section) is valid.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "beaconsim/errors.hpp"
#include "beaconsim/filter.hpp"
#include "beaconsim/render.hpp"
#include "beaconsim/world.hpp"

namespace beaconsim {

struct BeaconLayoutConfig {
    int count = 16;
    double spacing_m = 50.0;
    double runway_width_m = 40.0;
};

struct CameraConfig {
    int width_px = 1024;
    int height_px = 768;
    double fx_px = 1100.0;
    double fy_px = 1100.0;
    double cx_px = 511.5;
    double cy_px = 383.5;
    double mount_pitch_deg = 15.0;  // camera pitched down from the UAV nose
    double gain = 1.0;              // fixed-mode exposure gain

    CameraModel to_model() const;
};

struct ImuNoiseConfig {
    double yaw_bias_deg = 2.0;
    double yaw_walk_sigma_deg = 0.05;  // per-step random-walk increment sigma
    double attitude_sigma_deg = 0.1;   // white noise on roll/pitch
};

struct DetectorConfig {
    double k = 2.5;
    int window_px = 7;  // must stay below the beacon image separation at range
};

struct ExposureConfig {
    enum class Mode { kFixed, kSchedule, kSearch };
    Mode mode = Mode::kSchedule;
    double target_peak = 90.0;  // schedule: blob peak at the geometric mean range
    double gain_min = 1.0 / 1024.0;
    double gain_max = 1024.0;
    int max_sat_component_px = 50;  // search: saturated-component area bound
};

struct FilterConfig {
    int n_particles = 1000;
    InitPrior prior;                  // mean_state filled by the harness
    double init_offset_scale = 1.0;   // prior-mean error, in units of the prior sigmas
    ProcessNoise process_noise;
    WeightParams weight;
};

struct MetricsConfig {
    std::vector<double> bands_m{500.0, 100.0, 10.0};  // descending
};

struct RunConfig {
    GlideConfig glide;
    BeaconLayoutConfig beacons;
    SceneRenderConfig render;
    CameraConfig camera;
    ImuNoiseConfig imu;
    DetectorConfig detector;
    ExposureConfig exposure;
    FilterConfig filter;
    MetricsConfig metrics;
    std::uint64_t seed = 1;
    bool debug_dumps = false;

    /// Throws ConfigError naming the offending key on any violated invariant.
    void validate() const;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys, malformed
/// values, and violated invariants throw ConfigError with the key path.
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);  // ConfigError if unreadable

/// All numeric scalar keys, for parameter sweeps.
std::vector<std::string> numeric_config_keys();

/// Sets one numeric key; throws ConfigError (listing valid keys) otherwise.
void set_numeric_key(RunConfig& cfg, const std::string& key, double value);

/// The default configuration rendered as a config file with comments.
std::string default_config_text();

}  // namespace beaconsim
