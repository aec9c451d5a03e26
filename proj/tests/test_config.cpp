#include <doctest.h>

#include <algorithm>

#include "beaconsim/config.hpp"

using namespace beaconsim;

TEST_CASE("empty config is valid and equals the defaults") {
    const RunConfig cfg = parse_run_config_text("");
    const RunConfig defaults;
    CHECK(cfg.glide.speed_mps == defaults.glide.speed_mps);
    CHECK(cfg.filter.n_particles == defaults.filter.n_particles);
    CHECK(cfg.detector.k == 2.5);
    CHECK(cfg.detector.window_px == 15);
    CHECK(cfg.metrics.bands_m == std::vector<double>{500.0, 100.0, 10.0});
    CHECK(cfg.seed == 1);
}

TEST_CASE("config parses keys, comments, and lists") {
    const RunConfig cfg = parse_run_config_text(
        "# comment\n"
        "glide.speed_mps = 25.5   # trailing comment\n"
        "\n"
        "filter.n_particles = 250\n"
        "exposure.mode = fixed\n"
        "metrics.bands_m = 400, 50, 5\n"
        "sim.seed = 99\n"
        "sim.debug_dumps = true\n");
    CHECK(cfg.glide.speed_mps == 25.5);
    CHECK(cfg.filter.n_particles == 250);
    CHECK(cfg.exposure.mode == ExposureConfig::Mode::kFixed);
    CHECK(cfg.metrics.bands_m == std::vector<double>{400.0, 50.0, 5.0});
    CHECK(cfg.seed == 99);
    CHECK(cfg.debug_dumps);
}

TEST_CASE("config errors carry the key path and reason") {
    CHECK_THROWS_WITH_AS(parse_run_config_text("glide.speed_mps = fast\n"),
                         doctest::Contains("glide.speed_mps"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config_text("nosuch.key = 1\n"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config_text("glide.speed_mps\n"),
                         doctest::Contains("expected 'key = value'"), ConfigError);
    // Violated invariants name the key.
    CHECK_THROWS_WITH_AS(parse_run_config_text("beacons.count = 7\n"),
                         doctest::Contains("beacons.count"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config_text("metrics.bands_m = 10, 100\n"),
                         doctest::Contains("descending"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config_text("filter.weight_exponent_sign = 2\n"),
                         doctest::Contains("+1 or -1"), ConfigError);
}

TEST_CASE("every key in the rendered defaults parses back") {
    const std::string text = default_config_text();
    const RunConfig cfg = parse_run_config_text(text);
    CHECK(cfg.filter.n_particles == RunConfig{}.filter.n_particles);
    CHECK(cfg.exposure.mode == RunConfig{}.exposure.mode);
}

TEST_CASE("numeric key sweep accessor") {
    RunConfig cfg;
    set_numeric_key(cfg, "filter.n_particles", 500);
    CHECK(cfg.filter.n_particles == 500);
    set_numeric_key(cfg, "filter.weight_exponent_sign", 1.0);
    CHECK(cfg.filter.weight.exponent_sign == 1.0);

    const auto keys = numeric_config_keys();
    CHECK(std::find(keys.begin(), keys.end(), "filter.weight_p_px") != keys.end());
    CHECK(std::find(keys.begin(), keys.end(), "exposure.mode") == keys.end());

    CHECK_THROWS_WITH_AS(set_numeric_key(cfg, "exposure.mode", 1.0),
                         doctest::Contains("valid keys"), ConfigError);
    CHECK_THROWS_WITH_AS(set_numeric_key(cfg, "bogus", 1.0), doctest::Contains("valid keys"),
                         ConfigError);
    // Values that violate invariants are rejected too.
    CHECK_THROWS_AS(set_numeric_key(cfg, "filter.n_particles", 0.0), ConfigError);
}

TEST_CASE("missing config file raises ConfigError naming the path") {
    CHECK_THROWS_WITH_AS(load_run_config("/nonexistent/path.cfg"),
                         doctest::Contains("/nonexistent/path.cfg"), ConfigError);
}
