#include "beaconsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "beaconsim/mathutil.hpp"

namespace beaconsim {

namespace {
constexpr double kOrthonormalTol = 1e-9;
constexpr double kGroundEps = 1e-12;
}  // namespace

Pose3::Pose3(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
    const double ortho_err =
        (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho_err > kOrthonormalTol || std::abs(rotation.determinant() - 1.0) > kOrthonormalTol) {
        throw std::invalid_argument("Pose3: rotation is not orthonormal with determinant +1");
    }
}

Pose3 Pose3::inverse() const {
    Pose3 out;
    out.rotation_ = rotation_.transpose();
    out.translation_ = -(rotation_.transpose() * translation_);
    return out;
}

Eigen::Matrix4d Pose3::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation_;
    m.topRightCorner<3, 1>() = translation_;
    return m;
}

Pose3 operator*(const Pose3& a, const Pose3& b) {
    Pose3 out;
    out.rotation_ = a.rotation_ * b.rotation_;
    out.translation_ = a.rotation_ * b.translation_ + a.translation_;
    return out;
}

Eigen::Matrix3d rotation_zyx(double yaw_deg, double pitch_deg, double roll_deg) {
    const double cy = std::cos(deg_to_rad(yaw_deg)), sy = std::sin(deg_to_rad(yaw_deg));
    const double cp = std::cos(deg_to_rad(pitch_deg)), sp = std::sin(deg_to_rad(pitch_deg));
    const double cr = std::cos(deg_to_rad(roll_deg)), sr = std::sin(deg_to_rad(roll_deg));
    Eigen::Matrix3d rz, ry, rx;
    rz << cy, -sy, 0, sy, cy, 0, 0, 0, 1;
    ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
    rx << 1, 0, 0, 0, cr, -sr, 0, sr, cr;
    return rz * ry * rx;
}

EulerZyx euler_from_rotation(const Eigen::Matrix3d& r) {
    EulerZyx e;
    // r(2,0) = -sin(pitch)
    const double sp = std::clamp(-r(2, 0), -1.0, 1.0);
    e.pitch_deg = rad_to_deg(std::asin(sp));
    if (std::abs(sp) > 1.0 - 1e-12) {
        // Gimbal lock: only yaw +/- roll observable; put it all in yaw.
        e.roll_deg = 0.0;
        e.yaw_deg = rad_to_deg(std::atan2(-r(0, 1), r(1, 1)));
    } else {
        e.yaw_deg = rad_to_deg(std::atan2(r(1, 0), r(0, 0)));
        e.roll_deg = rad_to_deg(std::atan2(r(2, 1), r(2, 2)));
    }
    return e;
}

Eigen::Matrix3d CameraModel::intrinsics() const {
    Eigen::Matrix3d k;
    k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return k;
}

void CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
        throw std::invalid_argument("CameraModel: focal lengths must be positive");
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("CameraModel: image size must be positive");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
        throw std::invalid_argument("CameraModel: principal point outside the image");
    if (!(exposure_gain > 0.0))
        throw std::invalid_argument("CameraModel: exposure gain must be positive");
}

Pose3 forward_camera_mount(double mount_pitch_deg) {
    // Columns: camera X (right) = -Y_uav, camera Y (down) = -Z_uav,
    // camera Z (optical) = +X_uav; then pitch the assembly down.
    Eigen::Matrix3d aligned;
    aligned << 0, 0, 1,
              -1, 0, 0,
               0, -1, 0;
    const double p = deg_to_rad(mount_pitch_deg);
    Eigen::Matrix3d ry;
    ry << std::cos(p), 0, std::sin(p), 0, 1, 0, -std::sin(p), 0, std::cos(p);
    return Pose3(ry * aligned, Eigen::Vector3d::Zero());
}

HomographyBuilder::HomographyBuilder(const CameraModel& camera) : mount_(camera.mount) {
    // selector keeps (x, y, depth) of the homogeneous camera-frame point.
    Eigen::Matrix<double, 3, 4> selector;
    selector << 1, 0, 0, 0,
                0, 1, 0, 0,
                0, 0, 1, 0;
    prefix_ = camera.intrinsics() * selector * mount_.inverse().matrix();
}

double HomographyBuilder::camera_height(const Pose3& uav_pose) const {
    return (uav_pose * mount_).translation().z();
}

Homography HomographyBuilder::for_uav_pose(const Pose3& uav_pose) const {
    if (std::abs(camera_height(uav_pose)) < kGroundEps) {
        throw DegeneratePose("camera center lies on the ground plane");
    }
    // lifter embeds ground-plane homogeneous (x, y, 1) as world (x, y, 0, 1).
    Eigen::Matrix<double, 4, 3> lifter;
    lifter << 1, 0, 0,
              0, 1, 0,
              0, 0, 0,
              0, 0, 1;
    Homography out;
    out.h = prefix_ * uav_pose.inverse().matrix() * lifter;
    return out;
}

Homography make_homography(const CameraModel& camera, const Pose3& uav_pose) {
    return HomographyBuilder(camera).for_uav_pose(uav_pose);
}

std::vector<ImagePoint> project_beacons(const Homography& h,
                                        const std::vector<Eigen::Vector2d>& beacons,
                                        const CameraModel& camera) {
    if (beacons.empty()) throw std::invalid_argument("project_beacons: empty beacon list");
    std::vector<ImagePoint> out(beacons.size());
    for (std::size_t i = 0; i < beacons.size(); ++i) {
        const Eigen::Vector3d q = h.h * Eigen::Vector3d(beacons[i].x(), beacons[i].y(), 1.0);
        ImagePoint& p = out[i];
        if (q.z() <= 0.0) {
            p.visible = false;
            continue;
        }
        p.u = q.x() / q.z();
        p.v = q.y() / q.z();
        p.visible = p.u >= 0.0 && p.u < camera.width && p.v >= 0.0 && p.v < camera.height;
    }
    return out;
}

}  // namespace beaconsim
