#include "beaconsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace beaconsim {

CameraModel CameraConfig::to_model() const {
    CameraModel cam;
    cam.fx = fx_px;
    cam.fy = fy_px;
    cam.cx = cx_px;
    cam.cy = cy_px;
    cam.width = width_px;
    cam.height = height_px;
    cam.mount = forward_camera_mount(mount_pitch_deg);
    cam.exposure_gain = gain;
    return cam;
}

namespace {

struct KeyBinder {
    // Parses and stores the raw value; throws ConfigError on bad input.
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    // Reads the current (default) value back for documentation.
    std::function<std::string(const RunConfig&)> get;
    bool numeric_scalar = false;
    const char* comment = "";
};

double parse_double(const std::string& key, const std::string& raw) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &pos);
    } catch (...) {
        throw ConfigError(key, "not a number: '" + raw + "'");
    }
    if (pos != raw.size()) throw ConfigError(key, "trailing characters in '" + raw + "'");
    if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
    return v;
}

long long parse_int(const std::string& key, const std::string& raw) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(raw, &pos);
    } catch (...) {
        throw ConfigError(key, "not an integer: '" + raw + "'");
    }
    if (pos != raw.size()) throw ConfigError(key, "trailing characters in '" + raw + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw ConfigError(key, "expected true/false: '" + raw + "'");
}

std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

using BinderMap = std::map<std::string, KeyBinder>;

template <typename Getter>
void add_double_key(BinderMap& m, const std::string& key, Getter field, const char* comment) {
    KeyBinder b;
    b.set = [field](RunConfig& c, const std::string& k, const std::string& raw) {
        *field(c) = parse_double(k, raw);
    };
    b.get = [field](const RunConfig& c) {
        return format_double(*field(const_cast<RunConfig&>(c)));
    };
    b.numeric_scalar = true;
    b.comment = comment;
    m.emplace(key, std::move(b));
}

template <typename Getter>
void add_int_key(BinderMap& m, const std::string& key, Getter field, const char* comment) {
    KeyBinder b;
    b.set = [field](RunConfig& c, const std::string& k, const std::string& raw) {
        *field(c) = static_cast<int>(parse_int(k, raw));
    };
    b.get = [field](const RunConfig& c) {
        return std::to_string(*field(const_cast<RunConfig&>(c)));
    };
    b.numeric_scalar = true;
    b.comment = comment;
    m.emplace(key, std::move(b));
}

const BinderMap& binders() {
    static const BinderMap table = [] {
        BinderMap m;
        auto D = [&m](const std::string& key, auto field, const char* comment) {
            add_double_key(m, key, field, comment);
        };
        auto I = [&m](const std::string& key, auto field, const char* comment) {
            add_int_key(m, key, field, comment);
        };

        D("glide.start_distance_m", [](RunConfig& c) { return &c.glide.start_distance_m; },
          "along-runway distance from the threshold at the first frame");
        D("glide.start_altitude_m", [](RunConfig& c) { return &c.glide.start_altitude_m; }, "");
        D("glide.angle_deg", [](RunConfig& c) { return &c.glide.glide_angle_deg; },
          "descent angle, in (0, 15)");
        D("glide.speed_mps", [](RunConfig& c) { return &c.glide.speed_mps; }, "");
        D("glide.frame_rate_hz", [](RunConfig& c) { return &c.glide.frame_rate_hz; }, "");
        D("glide.lateral_offset_m", [](RunConfig& c) { return &c.glide.lateral_offset_m; },
          "initial cross-track error, decays to zero by the threshold");
        D("glide.heading_offset_deg", [](RunConfig& c) { return &c.glide.heading_offset_deg; },
          "initial heading error, decays to zero by the threshold");

        I("beacons.count", [](RunConfig& c) { return &c.beacons.count; },
          "even, >= 4; half per runway side");
        D("beacons.spacing_m", [](RunConfig& c) { return &c.beacons.spacing_m; }, "");
        D("beacons.runway_width_m", [](RunConfig& c) { return &c.beacons.runway_width_m; }, "");

        I("camera.width_px", [](RunConfig& c) { return &c.camera.width_px; }, "");
        I("camera.height_px", [](RunConfig& c) { return &c.camera.height_px; }, "");
        D("camera.fx_px", [](RunConfig& c) { return &c.camera.fx_px; }, "");
        D("camera.fy_px", [](RunConfig& c) { return &c.camera.fy_px; }, "");
        D("camera.cx_px", [](RunConfig& c) { return &c.camera.cx_px; }, "");
        D("camera.cy_px", [](RunConfig& c) { return &c.camera.cy_px; }, "");
        D("camera.mount_pitch_deg", [](RunConfig& c) { return &c.camera.mount_pitch_deg; },
          "camera pitched down from the UAV nose");
        D("camera.gain", [](RunConfig& c) { return &c.camera.gain; },
          "exposure gain used in fixed mode");

        D("render.beacon_power", [](RunConfig& c) { return &c.render.beacon_power; },
          "blob peak amplitude at 1 m before exposure gain");
        D("render.psf_sigma_px", [](RunConfig& c) { return &c.render.psf_sigma_px; }, "");
        D("render.background_mean", [](RunConfig& c) { return &c.render.background_mean; }, "");
        D("render.background_sigma", [](RunConfig& c) { return &c.render.background_sigma; },
          "pointwise sigma of the smooth background field");
        D("render.clutter_rate", [](RunConfig& c) { return &c.render.clutter_rate; },
          "expected clutter blobs per frame (Poisson)");
        D("render.clutter_power_min", [](RunConfig& c) { return &c.render.clutter_power_min; }, "");
        D("render.clutter_power_max", [](RunConfig& c) { return &c.render.clutter_power_max; }, "");
        I("render.saturation", [](RunConfig& c) { return &c.render.saturation; }, "");

        D("imu.yaw_bias_deg", [](RunConfig& c) { return &c.imu.yaw_bias_deg; }, "");
        D("imu.yaw_walk_sigma_deg", [](RunConfig& c) { return &c.imu.yaw_walk_sigma_deg; },
          "per-step yaw random-walk increment sigma");
        D("imu.attitude_sigma_deg", [](RunConfig& c) { return &c.imu.attitude_sigma_deg; },
          "white noise on roll/pitch");

        D("detector.k", [](RunConfig& c) { return &c.detector.k; },
          "vicinity-excess threshold in standard deviations");
        I("detector.window_px", [](RunConfig& c) { return &c.detector.window_px; },
          "odd vicinity size");

        D("exposure.target_peak", [](RunConfig& c) { return &c.exposure.target_peak; },
          "schedule mode: desired nearest-beacon blob peak");
        D("exposure.gain_min", [](RunConfig& c) { return &c.exposure.gain_min; }, "");
        D("exposure.gain_max", [](RunConfig& c) { return &c.exposure.gain_max; }, "");
        I("exposure.max_sat_component_px",
          [](RunConfig& c) { return &c.exposure.max_sat_component_px; },
          "search mode: saturated-component area bound");

        I("filter.n_particles", [](RunConfig& c) { return &c.filter.n_particles; }, "");
        D("filter.planar_sigma_m", [](RunConfig& c) { return &c.filter.prior.planar_sigma_m; },
          "initialization prior, planar position");
        D("filter.elevation_sigma_m",
          [](RunConfig& c) { return &c.filter.prior.elevation_sigma_m; }, "");
        D("filter.azimuth_sigma_deg",
          [](RunConfig& c) { return &c.filter.prior.azimuth_sigma_deg; }, "");
        D("filter.direction_sigma_deg",
          [](RunConfig& c) { return &c.filter.prior.direction_sigma_deg; },
          "initialization spread on movement-direction angles");
        D("filter.speed_sigma_frac", [](RunConfig& c) { return &c.filter.prior.speed_sigma_frac; },
          "initialization spread on speed, fraction of mean speed");
        D("filter.init_offset_scale", [](RunConfig& c) { return &c.filter.init_offset_scale; },
          "prior-mean error drawn at offset_scale * prior sigmas (0 = exact init)");
        D("filter.process_sigma_yaw_deg",
          [](RunConfig& c) { return &c.filter.process_noise.yaw_sigma_deg; }, "");
        D("filter.process_sigma_dir_az_deg",
          [](RunConfig& c) { return &c.filter.process_noise.dir_azimuth_sigma_deg; }, "");
        D("filter.process_sigma_dir_pitch_deg",
          [](RunConfig& c) { return &c.filter.process_noise.dir_pitch_sigma_deg; }, "");
        D("filter.process_sigma_speed_mps",
          [](RunConfig& c) { return &c.filter.process_noise.speed_sigma_mps; }, "");
        D("filter.weight_p_px", [](RunConfig& c) { return &c.filter.weight.p_px; },
          "distance-score softening length P");
        D("filter.weight_q", [](RunConfig& c) { return &c.filter.weight.q; },
          "distance-score exponent q");
        D("filter.offscreen_distance_px",
          [](RunConfig& c) { return &c.filter.weight.offscreen_distance_px; },
          "distance charged for non-visible projections");
        D("filter.weight_exponent_sign",
          [](RunConfig& c) { return &c.filter.weight.exponent_sign; },
          "-1: zero distance is optimal; +1 selects the unflipped variant");

        // Non-numeric keys.
        {
            KeyBinder b;
            b.set = [](RunConfig& c, const std::string& k, const std::string& raw) {
                if (raw == "fixed")
                    c.exposure.mode = ExposureConfig::Mode::kFixed;
                else if (raw == "schedule")
                    c.exposure.mode = ExposureConfig::Mode::kSchedule;
                else if (raw == "search")
                    c.exposure.mode = ExposureConfig::Mode::kSearch;
                else
                    throw ConfigError(k, "expected fixed|schedule|search: '" + raw + "'");
            };
            b.get = [](const RunConfig& c) -> std::string {
                switch (c.exposure.mode) {
                    case ExposureConfig::Mode::kFixed: return "fixed";
                    case ExposureConfig::Mode::kSchedule: return "schedule";
                    case ExposureConfig::Mode::kSearch: return "search";
                }
                return "schedule";
            };
            b.comment = "fixed | schedule | search";
            m.emplace("exposure.mode", std::move(b));
        }
        {
            KeyBinder b;
            b.set = [](RunConfig& c, const std::string& k, const std::string& raw) {
                std::vector<double> bands;
                std::stringstream ss(raw);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    const auto first = item.find_first_not_of(" \t");
                    const auto last = item.find_last_not_of(" \t");
                    if (first == std::string::npos) throw ConfigError(k, "empty band entry");
                    bands.push_back(parse_double(k, item.substr(first, last - first + 1)));
                }
                if (bands.empty()) throw ConfigError(k, "band list must be nonempty");
                c.metrics.bands_m = bands;
            };
            b.get = [](const RunConfig& c) {
                std::string out;
                for (std::size_t i = 0; i < c.metrics.bands_m.size(); ++i) {
                    if (i) out += ",";
                    out += format_double(c.metrics.bands_m[i]);
                }
                return out;
            };
            b.comment = "descending distances-to-touchdown, comma separated";
            m.emplace("metrics.bands_m", std::move(b));
        }
        {
            KeyBinder b;
            b.set = [](RunConfig& c, const std::string& k, const std::string& raw) {
                const long long v = parse_int(k, raw);
                if (v < 0) throw ConfigError(k, "seed must be nonnegative");
                c.seed = static_cast<std::uint64_t>(v);
            };
            b.get = [](const RunConfig& c) { return std::to_string(c.seed); };
            b.comment = "base seed; all random streams derive from it";
            m.emplace("sim.seed", std::move(b));
        }
        {
            KeyBinder b;
            b.set = [](RunConfig& c, const std::string& k, const std::string& raw) {
                c.debug_dumps = parse_bool(k, raw);
            };
            b.get = [](const RunConfig& c) { return c.debug_dumps ? "true" : "false"; };
            b.comment = "write per-frame image/source/distance dumps";
            m.emplace("sim.debug_dumps", std::move(b));
        }
        return m;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void RunConfig::validate() const {
    const auto require = [](bool ok, const char* key, const char* reason) {
        if (!ok) throw ConfigError(key, reason);
    };
    require(glide.start_distance_m > 0, "glide.start_distance_m", "must be positive");
    require(glide.start_altitude_m > 0, "glide.start_altitude_m", "must be positive");
    require(glide.glide_angle_deg > 0 && glide.glide_angle_deg < 15, "glide.angle_deg",
            "must be in (0, 15)");
    require(glide.speed_mps > 0, "glide.speed_mps", "must be positive");
    require(glide.frame_rate_hz > 0, "glide.frame_rate_hz", "must be positive");

    require(beacons.count >= 4 && beacons.count % 2 == 0, "beacons.count",
            "must be even and >= 4");
    require(beacons.spacing_m > 0, "beacons.spacing_m", "must be positive");
    require(beacons.runway_width_m > 0, "beacons.runway_width_m", "must be positive");

    require(camera.width_px > 0 && camera.height_px > 0, "camera.width_px",
            "image size must be positive");
    require(camera.fx_px > 0 && camera.fy_px > 0, "camera.fx_px",
            "focal lengths must be positive");
    require(camera.cx_px >= 0 && camera.cx_px < camera.width_px, "camera.cx_px",
            "principal point must lie inside the image");
    require(camera.cy_px >= 0 && camera.cy_px < camera.height_px, "camera.cy_px",
            "principal point must lie inside the image");
    require(camera.gain > 0, "camera.gain", "must be positive");

    require(render.psf_sigma_px > 0, "render.psf_sigma_px", "must be positive");
    require(render.background_sigma >= 0, "render.background_sigma", "must be nonnegative");
    require(render.clutter_rate >= 0, "render.clutter_rate", "must be nonnegative");
    require(render.clutter_power_max >= render.clutter_power_min, "render.clutter_power_max",
            "must be >= render.clutter_power_min");
    require(render.saturation >= 1 && render.saturation <= 255, "render.saturation",
            "must be in [1, 255]");

    require(imu.yaw_walk_sigma_deg >= 0, "imu.yaw_walk_sigma_deg", "must be nonnegative");
    require(imu.attitude_sigma_deg >= 0, "imu.attitude_sigma_deg", "must be nonnegative");

    require(detector.k > 0, "detector.k", "must be positive");
    require(detector.window_px >= 3 && detector.window_px % 2 == 1, "detector.window_px",
            "must be odd and >= 3");

    require(exposure.gain_min > 0, "exposure.gain_min", "must be positive");
    require(exposure.gain_max >= exposure.gain_min, "exposure.gain_max",
            "must be >= exposure.gain_min");
    require(exposure.target_peak > 0, "exposure.target_peak", "must be positive");
    require(exposure.max_sat_component_px > 0, "exposure.max_sat_component_px",
            "must be positive");

    require(filter.n_particles >= 1, "filter.n_particles", "must be >= 1");
    require(filter.prior.planar_sigma_m >= 0, "filter.planar_sigma_m", "must be nonnegative");
    require(filter.prior.elevation_sigma_m >= 0, "filter.elevation_sigma_m",
            "must be nonnegative");
    require(filter.prior.azimuth_sigma_deg >= 0, "filter.azimuth_sigma_deg",
            "must be nonnegative");
    require(filter.prior.direction_sigma_deg >= 0, "filter.direction_sigma_deg",
            "must be nonnegative");
    require(filter.prior.speed_sigma_frac >= 0, "filter.speed_sigma_frac",
            "must be nonnegative");
    require(filter.init_offset_scale >= 0, "filter.init_offset_scale", "must be nonnegative");
    require(filter.process_noise.yaw_sigma_deg >= 0, "filter.process_sigma_yaw_deg",
            "must be nonnegative");
    require(filter.process_noise.dir_azimuth_sigma_deg >= 0, "filter.process_sigma_dir_az_deg",
            "must be nonnegative");
    require(filter.process_noise.dir_pitch_sigma_deg >= 0, "filter.process_sigma_dir_pitch_deg",
            "must be nonnegative");
    require(filter.process_noise.speed_sigma_mps >= 0, "filter.process_sigma_speed_mps",
            "must be nonnegative");
    require(filter.weight.p_px > 0, "filter.weight_p_px", "must be positive");
    require(filter.weight.q > 0, "filter.weight_q", "must be positive");
    require(filter.weight.offscreen_distance_px > 0, "filter.offscreen_distance_px",
            "must be positive");
    require(filter.weight.exponent_sign == 1.0 || filter.weight.exponent_sign == -1.0,
            "filter.weight_exponent_sign", "must be +1 or -1");

    require(!metrics.bands_m.empty(), "metrics.bands_m", "must be nonempty");
    for (std::size_t i = 0; i < metrics.bands_m.size(); ++i) {
        require(metrics.bands_m[i] > 0, "metrics.bands_m", "bands must be positive");
        if (i > 0)
            require(metrics.bands_m[i] < metrics.bands_m[i - 1], "metrics.bands_m",
                    "bands must be strictly descending");
    }
}

RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    const BinderMap& table = binders();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError(key, "unknown key");
        it->second.set(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_run_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    return parse_run_config(in);
}

std::vector<std::string> numeric_config_keys() {
    std::vector<std::string> keys;
    for (const auto& [key, binder] : binders()) {
        if (binder.numeric_scalar) keys.push_back(key);
    }
    return keys;
}

void set_numeric_key(RunConfig& cfg, const std::string& key, double value) {
    const BinderMap& table = binders();
    const auto it = table.find(key);
    if (it == table.end() || !it->second.numeric_scalar) {
        std::string valid;
        for (const std::string& k : numeric_config_keys()) {
            if (!valid.empty()) valid += ", ";
            valid += k;
        }
        throw ConfigError(key, "not a numeric config key; valid keys: " + valid);
    }
    std::ostringstream raw;
    raw.precision(17);
    raw << value;
    it->second.set(cfg, key, raw.str());
    cfg.validate();
}

std::string default_config_text() {
    const RunConfig defaults;
    std::ostringstream out;
    out << "# beaconsim run configuration (defaults; every key is optional)\n";
    std::string section;
    for (const auto& [key, binder] : binders()) {
        const std::string sec = key.substr(0, key.find('.'));
        if (sec != section) {
            out << "\n";
            section = sec;
        }
        out << key << " = " << binder.get(defaults);
        if (binder.comment[0] != '\0') out << "  # " << binder.comment;
        out << "\n";
    }
    return out.str();
}

}  // namespace beaconsim
