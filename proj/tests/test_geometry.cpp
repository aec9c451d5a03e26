#include <doctest.h>

#include <cmath>

#include "beaconsim/geometry.hpp"
#include "beaconsim/mathutil.hpp"
#include "beaconsim/rng.hpp"
#include "beaconsim/world.hpp"
#include "oracles.hpp"

using namespace beaconsim;

namespace {

Pose3 random_pose(Rng& rng) {
    const double yaw = rng.uniform(-180.0, 180.0);
    const double pitch = rng.uniform(-25.0, 25.0);
    const double roll = rng.uniform(-25.0, 25.0);
    const Eigen::Vector3d t(rng.uniform(-1500.0, 1500.0), rng.uniform(-300.0, 300.0),
                            rng.uniform(5.0, 300.0));
    return Pose3(rotation_zyx(yaw, pitch, roll), t);
}

CameraModel test_camera(double mount_pitch = 15.0) {
    CameraModel cam;
    cam.mount = forward_camera_mount(mount_pitch);
    return cam;
}

}  // namespace

TEST_CASE("Pose3 rejects non-orthonormal rotations") {
    Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
    bad(0, 0) = 1.001;
    CHECK_THROWS_AS(Pose3(bad, Eigen::Vector3d::Zero()), std::invalid_argument);
    Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
    reflect(2, 2) = -1.0;  // det -1
    CHECK_THROWS_AS(Pose3(reflect, Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("Pose3 group laws: (A*B)^-1 == B^-1 * A^-1") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Pose3 a = random_pose(rng), b = random_pose(rng);
        const Pose3 lhs = (a * b).inverse();
        const Pose3 rhs = b.inverse() * a.inverse();
        CHECK((lhs.rotation() - rhs.rotation()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((lhs.translation() - rhs.translation()).cwiseAbs().maxCoeff() < 1e-9);
        const Pose3 ident = a * a.inverse();
        CHECK((ident.rotation() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(ident.translation().cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("rotation_zyx matches composition of elementary rotations") {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const double yaw = rng.uniform(-180.0, 180.0);
        const double pitch = rng.uniform(-89.0, 89.0);
        const double roll = rng.uniform(-180.0, 180.0);
        // Rodrigues for each axis, composed independently of rotation_zyx.
        const Eigen::Matrix3d rz =
            Eigen::AngleAxisd(deg_to_rad(yaw), Eigen::Vector3d::UnitZ()).toRotationMatrix();
        const Eigen::Matrix3d ry =
            Eigen::AngleAxisd(deg_to_rad(pitch), Eigen::Vector3d::UnitY()).toRotationMatrix();
        const Eigen::Matrix3d rx =
            Eigen::AngleAxisd(deg_to_rad(roll), Eigen::Vector3d::UnitX()).toRotationMatrix();
        CHECK((rotation_zyx(yaw, pitch, roll) - rz * ry * rx).cwiseAbs().maxCoeff() < 1e-12);

        const EulerZyx e = euler_from_rotation(rotation_zyx(yaw, pitch, roll));
        CHECK(std::abs(angle_diff_deg(e.yaw_deg, yaw)) < 1e-9);
        CHECK(std::abs(e.pitch_deg - pitch) < 1e-9);
        CHECK(std::abs(angle_diff_deg(e.roll_deg, roll)) < 1e-9);
    }
}

TEST_CASE("pose_from_angles identity and quarter turn") {
    CHECK((rotation_zyx(0, 0, 0) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::Matrix3d quarter;
    quarter << 0, -1, 0, 1, 0, 0, 0, 0, 1;  // z-axis quarter turn
    CHECK((rotation_zyx(90, 0, 0) - quarter).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("homography: identity poses are degenerate (camera on the plane)") {
    const CameraModel cam = test_camera(0.0);
    CHECK_THROWS_AS(make_homography(cam, Pose3()), DegeneratePose);
}

TEST_CASE("homography: beacon under a nadir camera projects to the principal point") {
    CameraModel cam;
    // Nadir mount: optical axis straight down, right-handed.
    Eigen::Matrix3d r;
    r.col(0) = Eigen::Vector3d(0, -1, 0);
    r.col(1) = Eigen::Vector3d(-1, 0, 0);
    r.col(2) = Eigen::Vector3d(0, 0, -1);
    cam.mount = Pose3(r, Eigen::Vector3d::Zero());
    const Pose3 uav(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, 50));
    const Homography h = make_homography(cam, uav);
    const auto pts = project_beacons(h, {Eigen::Vector2d(0, 0)}, cam);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].visible);
    CHECK(pts[0].u == doctest::Approx(cam.cx).epsilon(1e-12));
    CHECK(pts[0].v == doctest::Approx(cam.cy).epsilon(1e-12));
}

TEST_CASE("homography matches the pinhole oracle on random valid poses") {
    Rng rng(13);
    const CameraModel cam = test_camera();
    int compared = 0;
    for (int i = 0; i < 1000; ++i) {
        const Pose3 uav = random_pose(rng);
        Homography h;
        try {
            h = make_homography(cam, uav);
        } catch (const DegeneratePose&) {
            continue;  // mount pitch can put the camera below z=0 only near the ground
        }
        std::vector<Eigen::Vector2d> pts;
        for (int j = 0; j < 4; ++j)
            pts.emplace_back(rng.uniform(-500.0, 1500.0), rng.uniform(-500.0, 500.0));
        const auto proj = project_beacons(h, pts, cam);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const auto ref = oracles::pinhole_project(cam, uav, pts[j]);
            if (std::abs(ref.depth) < 1e-6) continue;  // grazing: both sides ill-conditioned
            if (ref.depth > 0.0) {
                CHECK(proj[j].visible == ref.visible);
                CHECK(std::abs(proj[j].u - ref.u) < 1e-6);
                CHECK(std::abs(proj[j].v - ref.v) < 1e-6);
                ++compared;
            } else {
                CHECK_FALSE(proj[j].visible);
            }
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("projection is invariant to positive homography rescaling") {
    Rng rng(14);
    const CameraModel cam = test_camera();
    for (int i = 0; i < 100; ++i) {
        const Pose3 uav = random_pose(rng);
        const Homography h = make_homography(cam, uav);
        Homography scaled;
        const double c = std::exp(rng.uniform(-4.0, 4.0));
        scaled.h = c * h.h;
        std::vector<Eigen::Vector2d> pts;
        for (int j = 0; j < 4; ++j)
            pts.emplace_back(rng.uniform(-500.0, 1500.0), rng.uniform(-500.0, 500.0));
        const auto a = project_beacons(h, pts, cam);
        const auto b = project_beacons(scaled, pts, cam);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            CHECK(a[j].visible == b[j].visible);
            if (a[j].visible) {
                CHECK(a[j].u == doctest::Approx(b[j].u).epsilon(1e-12));
                CHECK(a[j].v == doctest::Approx(b[j].v).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("project_beacons marks points behind the camera not visible") {
    const CameraModel cam = test_camera(10.0);
    // UAV at the approach start, looking toward -X: points far behind it
    // (x >> uav x) have negative depth.
    const Pose3 uav(rotation_zyx(180.0, 3.4, 0.0), Eigen::Vector3d(1000, 0, 60));
    const Homography h = make_homography(cam, uav);
    const auto pts = project_beacons(h, {Eigen::Vector2d(2000.0, 0.0)}, cam);
    CHECK_FALSE(pts[0].visible);
}

TEST_CASE("16-beacon map from a pose on the glide path is fully visible") {
    const CameraModel cam = test_camera();
    const BeaconMap beacons = generate_beacon_map(16, 50.0, 40.0);
    const Pose3 uav(rotation_zyx(180.0, 3.4336313, 0.0), Eigen::Vector3d(1000, 0, 60));
    const Homography h = make_homography(cam, uav);
    const auto proj = project_beacons(h, beacons.positions, cam);
    REQUIRE(proj.size() == 16);
    for (std::size_t i = 0; i < proj.size(); ++i) {
        CHECK(proj[i].visible);
        const auto ref = oracles::pinhole_project(cam, uav, beacons.positions[i]);
        CHECK(std::abs(proj[i].u - ref.u) < 1e-6);
        CHECK(std::abs(proj[i].v - ref.v) < 1e-6);
    }
}
