#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "beaconsim/mathutil.hpp"
#include "beaconsim/world.hpp"

using namespace beaconsim;

TEST_CASE("beacon map layout: 16 beacons, spacing 50, width 40") {
    const BeaconMap map = generate_beacon_map(16, 50.0, 40.0);
    REQUIRE(map.positions.size() == 16);
    std::set<double> xs, ys;
    for (const auto& p : map.positions) {
        xs.insert(p.x());
        ys.insert(p.y());
    }
    CHECK(ys == std::set<double>{-20.0, 20.0});
    CHECK(xs == std::set<double>{0, 50, 100, 150, 200, 250, 300, 350});
}

TEST_CASE("beacon map layout: minimal case") {
    const BeaconMap map = generate_beacon_map(4, 1.0, 2.0);
    REQUIRE(map.positions.size() == 4);
    const std::set<std::pair<double, double>> got(
        [&] {
            std::set<std::pair<double, double>> s;
            for (const auto& p : map.positions) s.insert({p.x(), p.y()});
            return s;
        }());
    CHECK(got == std::set<std::pair<double, double>>{{0, 1}, {0, -1}, {1, 1}, {1, -1}});
}

TEST_CASE("beacon map is deterministic and y-symmetric") {
    const BeaconMap a = generate_beacon_map(12, 35.0, 30.0);
    const BeaconMap b = generate_beacon_map(12, 35.0, 30.0);
    REQUIRE(a.positions.size() == b.positions.size());
    for (std::size_t i = 0; i < a.positions.size(); ++i) CHECK(a.positions[i] == b.positions[i]);

    std::set<std::pair<double, double>> original, mirrored;
    for (const auto& p : a.positions) {
        original.insert({p.x(), p.y()});
        mirrored.insert({p.x(), -p.y()});
    }
    CHECK(original == mirrored);
}

TEST_CASE("beacon map rejects bad layouts") {
    CHECK_THROWS_AS(generate_beacon_map(3, 50, 40), BadLayout);
    CHECK_THROWS_AS(generate_beacon_map(2, 50, 40), BadLayout);
    CHECK_THROWS_AS(generate_beacon_map(16, 0, 40), BadLayout);
    CHECK_THROWS_AS(generate_beacon_map(16, 50, -1), BadLayout);
}

TEST_CASE("glide trajectory samples the closed-form descent") {
    GlideConfig cfg;
    cfg.start_distance_m = 1000;
    cfg.start_altitude_m = 60;
    cfg.glide_angle_deg = rad_to_deg(std::atan2(60.0, 1000.0));
    cfg.speed_mps = 30;
    cfg.frame_rate_hz = 10;
    cfg.lateral_offset_m = 0;
    cfg.heading_offset_deg = 0;
    const auto truth = generate_glide_trajectory(cfg);
    CHECK(truth.size() > 320);
    CHECK(truth.size() < 345);

    // First record sits exactly at the configured start.
    CHECK(truth.front().pose.translation().x() == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(truth.front().pose.translation().y() == 0.0);
    CHECK(truth.front().pose.translation().z() == doctest::Approx(60.0).epsilon(1e-12));

    // Altitude strictly decreasing, confined to the y = 0 plane.
    for (std::size_t i = 1; i < truth.size(); ++i) {
        CHECK(truth[i].pose.translation().z() < truth[i - 1].pose.translation().z());
        CHECK(truth[i].pose.translation().y() == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(truth.back().pose.translation().z() > 0.5);

    // Recompute the line sampling independently.
    const double angle = deg_to_rad(cfg.glide_angle_deg);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double t = static_cast<double>(i) * 0.1;
        CHECK(truth[i].t_s == doctest::Approx(t).epsilon(1e-12));
        CHECK(truth[i].pose.translation().x() ==
              doctest::Approx(1000.0 - 30.0 * std::cos(angle) * t).epsilon(1e-9));
        CHECK(truth[i].pose.translation().z() ==
              doctest::Approx(60.0 - 30.0 * std::sin(angle) * t).epsilon(1e-9));
    }
}

TEST_CASE("glide trajectory moves speed*dt per step") {
    GlideConfig cfg;  // defaults include lateral and heading offsets
    const auto truth = generate_glide_trajectory(cfg);
    REQUIRE(truth.size() > 2);
    const double step = cfg.speed_mps / cfg.frame_rate_hz;
    for (std::size_t i = 1; i < truth.size(); ++i) {
        const double moved =
            (truth[i].pose.translation() - truth[i - 1].pose.translation()).norm();
        CHECK(std::abs(moved - step) < 1e-6);
    }
}

TEST_CASE("glide trajectory yaw carries the decaying heading offset") {
    GlideConfig cfg;
    cfg.lateral_offset_m = 0;
    cfg.heading_offset_deg = 4.0;
    const auto truth = generate_glide_trajectory(cfg);
    const auto yaw_of = [](const TruthRecord& r) {
        return euler_from_rotation(r.pose.rotation()).yaw_deg;
    };
    // Course is along -X (yaw 180); the offset starts at 4 degrees and decays.
    CHECK(std::abs(angle_diff_deg(yaw_of(truth.front()), 180.0 + 4.0)) < 1e-9);
    const double last_offset = std::abs(angle_diff_deg(yaw_of(truth.back()), 180.0));
    CHECK(last_offset < 0.2);
    for (std::size_t i = 1; i < truth.size(); ++i) {
        const double prev = std::abs(angle_diff_deg(yaw_of(truth[i - 1]), 180.0));
        const double cur = std::abs(angle_diff_deg(yaw_of(truth[i]), 180.0));
        CHECK(cur <= prev + 1e-12);
    }
}

TEST_CASE("imu synthesis: zero noise reproduces truth; bias shifts yaw") {
    GlideConfig cfg;
    const auto truth = generate_glide_trajectory(cfg);
    const auto clean = synthesize_imu(truth, 0.0, 0.0, 0.0, 7);
    REQUIRE(clean.size() == truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const EulerZyx e = euler_from_rotation(truth[i].pose.rotation());
        CHECK(clean[i].t_s == truth[i].t_s);
        CHECK(clean[i].yaw_deg == doctest::Approx(e.yaw_deg).epsilon(1e-12));
        CHECK(clean[i].pitch_deg == doctest::Approx(e.pitch_deg).epsilon(1e-12));
        CHECK(clean[i].roll_deg == doctest::Approx(e.roll_deg).epsilon(1e-12));
    }

    const auto biased = synthesize_imu(truth, 0.0, 2.0, 0.0, 7);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(std::abs(angle_diff_deg(biased[i].yaw_deg, clean[i].yaw_deg) - 2.0) < 1e-12);
    }
}

TEST_CASE("imu synthesis is deterministic per seed") {
    GlideConfig cfg;
    const auto truth = generate_glide_trajectory(cfg);
    const auto a = synthesize_imu(truth, 0.1, 1.0, 0.2, 42);
    const auto b = synthesize_imu(truth, 0.1, 1.0, 0.2, 42);
    const auto c = synthesize_imu(truth, 0.1, 1.0, 0.2, 43);
    REQUIRE(a.size() == b.size());
    bool identical_ab = true, identical_ac = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        identical_ab &= a[i].yaw_deg == b[i].yaw_deg && a[i].roll_deg == b[i].roll_deg &&
                        a[i].pitch_deg == b[i].pitch_deg;
        identical_ac &= a[i].yaw_deg == c[i].yaw_deg;
    }
    CHECK(identical_ab);
    CHECK_FALSE(identical_ac);
}

TEST_CASE("imu yaw walk increments match the configured sigma") {
    // Constant-pose truth stream long enough for a 10% statistical bound.
    std::vector<TruthRecord> truth(10001);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        truth[i].t_s = static_cast<double>(i) * 0.1;
        truth[i].pose = Pose3(rotation_zyx(45.0, 2.0, -1.0), Eigen::Vector3d(0, 0, 100));
        truth[i].speed_mps = 0.0;
    }
    const double sigma = 0.25;
    const auto imu = synthesize_imu(truth, sigma, 0.0, 0.0, 99);
    double sumsq = 0.0;
    for (std::size_t i = 1; i < imu.size(); ++i) {
        const double inc = imu[i].yaw_deg - imu[i - 1].yaw_deg;
        sumsq += inc * inc;
    }
    const double empirical = std::sqrt(sumsq / static_cast<double>(imu.size() - 1));
    CHECK(empirical == doctest::Approx(sigma).epsilon(0.10));
}
