#include "beaconsim/cli_app.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "beaconsim/detect.hpp"
#include "beaconsim/harness.hpp"
#include "beaconsim/rng.hpp"

namespace beaconsim {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// BEACONSIM_OUT_DIR overrides any --out flag.
fs::path resolve_out_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("BEACONSIM_OUT_DIR"); env && *env) return fs::path(env);
    return fs::path(flag_value);
}

// Distance map scaled to 8 bits for debug dumps.
GrayImage dump_distance(const DistanceMap& dmap) {
    GrayImage img(dmap.width, dmap.height);
    const double scale = dmap.max_distance > 0.0 ? 255.0 / dmap.max_distance : 0.0;
    for (std::size_t i = 0; i < dmap.dist.size(); ++i) {
        img.pixels[i] = static_cast<std::uint8_t>(
            std::clamp(std::lround(dmap.dist[i] * scale), 0L, 255L));
    }
    return img;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 std::optional<std::uint64_t> seed_override, bool debug,
                 std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (seed_override) cfg.seed = *seed_override;
    if (debug) cfg.debug_dumps = true;

    const fs::path out_dir = resolve_out_dir(out_flag);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        err << "error: cannot create output directory " << out_dir << ": " << ec.message()
            << "\n";
        return 2;
    }

    SimHooks hooks;
    if (cfg.debug_dumps) {
        hooks.on_frame = [&out_dir](int frame, const GrayImage& img, const BinaryMap& map,
                                    const DistanceMap& dmap) {
            char name[64];
            std::snprintf(name, sizeof name, "frame_%04d_image.pgm", frame);
            write_pgm((out_dir / name).string(), img);
            std::snprintf(name, sizeof name, "frame_%04d_sources.pbm", frame);
            write_pbm((out_dir / name).string(), map);
            std::snprintf(name, sizeof name, "frame_%04d_dist.pgm", frame);
            write_pgm((out_dir / name).string(), dump_distance(dmap));
        };
    }

    TrajectoryLog log;
    try {
        log = run_simulation(cfg, cfg.debug_dumps ? &hooks : nullptr);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    const MetricsTable metrics = compute_metrics(log, cfg.metrics.bands_m);
    write_log((out_dir / "trajectory.csv").string(), log);
    write_metrics((out_dir / "metrics.csv").string(), metrics);
    out << format_metrics(metrics);
    if (!log.divergence_times.empty()) {
        err << "warning: filter diverged on " << log.divergence_times.size()
            << " frame(s); weights were reset\n";
        return 3;
    }
    return 0;
}

int cmd_detect(const std::string& image_path, double k, int window, bool pbm_out,
               std::ostream& out, std::ostream& err) {
    GrayImage img;
    try {
        img = read_pgm(image_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    DetectionResult result;
    try {
        result = detect_light_sources(img, k, window);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    out << "u,v,intensity\n";
    for (const Detection& d : result.detections) {
        out << d.u << ',' << d.v << ',' << fmt17(d.intensity) << "\n";
    }
    if (pbm_out) {
        fs::path p(image_path);
        p.replace_extension(".sources.pbm");
        write_pbm(p.string(), result.map);
    }
    return 0;
}

int cmd_metrics(const std::string& log_path, const std::vector<double>& bands,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
    TrajectoryLog log;
    try {
        log = read_log(log_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    MetricsTable table;
    try {
        table = compute_metrics(log, bands);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    out << format_metrics(table);
    if (!out_path.empty()) write_metrics(out_path, table);
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& key,
              const std::vector<double>& values, const std::string& out_flag,
              std::ostream& out, std::ostream& err) {
    RunConfig base;
    try {
        base = load_run_config(config_path);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (values.empty()) {
        err << "error: sweep needs a nonempty value list\n";
        return 2;
    }
    const fs::path out_dir = resolve_out_dir(out_flag);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        err << "error: cannot create output directory " << out_dir << ": " << ec.message()
            << "\n";
        return 2;
    }

    std::ostringstream rows;
    std::string header = "key,value";
    bool header_done = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig cfg = base;
        try {
            set_numeric_key(cfg, key, values[i]);
        } catch (const ConfigError& e) {
            err << "error: " << e.what() << "\n";
            return 2;
        }
        cfg.seed = derive_seed(base.seed, "sweep", i);
        const TrajectoryLog log = run_simulation(cfg);
        const MetricsTable table = compute_metrics(log, cfg.metrics.bands_m);
        if (!header_done) {
            for (const MetricsRow& r : table.rows) {
                header += ",lin_dev_m@" + fmt17(r.band_m) + ",orient_dev_deg@" + fmt17(r.band_m);
            }
            header_done = true;
        }
        rows << key << ',' << fmt17(values[i]);
        for (const MetricsRow& r : table.rows) {
            rows << ',' << fmt17(r.max_linear_dev_m) << ',' << fmt17(r.max_orient_dev_deg);
        }
        rows << "\n";
        out << "value " << fmt17(values[i]) << " done\n";
    }
    std::ofstream sweep_file(out_dir / "sweep.csv");
    if (!sweep_file) {
        err << "error: cannot write sweep.csv\n";
        return 2;
    }
    sweep_file << header << "\n" << rows.str();
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Infrared-beacon landing tracker simulator"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a closed-loop simulation");
    std::string sim_config, sim_out = ".";
    std::optional<std::uint64_t> sim_seed;
    bool sim_debug = false;
    sim->add_option("--config", sim_config, "config file")->required();
    sim->add_option("--out", sim_out, "output directory (BEACONSIM_OUT_DIR overrides)");
    sim->add_option("--seed", sim_seed, "override the config seed");
    sim->add_flag("--debug-dumps", sim_debug, "write per-frame PGM/PBM dumps");

    // detect
    auto* det = app.add_subcommand("detect", "detect light sources in a PGM image");
    std::string det_image;
    double det_k = 2.5;
    int det_window = 7;
    bool det_pbm = false;
    det->add_option("image", det_image, "input P5 PGM")->required();
    det->add_option("--k", det_k, "threshold in standard deviations");
    det->add_option("--window", det_window, "odd vicinity size");
    det->add_flag("--pbm-out", det_pbm, "write the binary map next to the input");

    // metrics
    auto* met = app.add_subcommand("metrics", "compute deviation bands from a trajectory log");
    std::string met_log, met_out;
    std::vector<double> met_bands{500.0, 100.0, 10.0};
    met->add_option("log", met_log, "trajectory.csv")->required();
    met->add_option("--bands", met_bands, "descending distances-to-touchdown")
        ->delimiter(',');
    met->add_option("--out", met_out, "also write metrics CSV here");

    // sweep
    auto* swp = app.add_subcommand("sweep", "run simulate across one numeric config key");
    std::string swp_config, swp_key, swp_out = ".";
    std::vector<double> swp_values;
    swp->add_option("--config", swp_config, "config file")->required();
    swp->add_option("--key", swp_key, "numeric config key")->required();
    swp->add_option("--values", swp_values, "comma-separated values")
        ->required()
        ->delimiter(',');
    swp->add_option("--out", swp_out, "output directory (BEACONSIM_OUT_DIR overrides)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_config, sim_out, sim_seed, sim_debug, out, err);
        if (det->parsed()) return cmd_detect(det_image, det_k, det_window, det_pbm, out, err);
        if (met->parsed()) return cmd_metrics(met_log, met_bands, met_out, out, err);
        if (swp->parsed()) return cmd_sweep(swp_config, swp_key, swp_values, swp_out, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace beaconsim
