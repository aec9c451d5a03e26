// Coordinate frames, camera model, and the ground-plane-to-image homography.
//
// Frame conventions (also documented in the README):
//   world:  X along the runway centerline toward the approach side, Y left,
//           Z up; origin at the threshold between the two beacon lines.
//   UAV:    X forward, Y left, Z up.
//   camera: X right, Y down, Z along the optical axis (computer-vision style).
// Euler order is intrinsic yaw(Z) -> pitch(Y) -> roll(X), i.e.
// R = Rz(yaw) * Ry(pitch) * Rx(roll). With Y pointing left, positive pitch
// tilts the nose down and positive roll banks right.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "beaconsim/errors.hpp"

namespace beaconsim {

/// Rigid transform mapping local coordinates into the parent frame.
class Pose3 {
  public:
    Pose3() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

    /// Throws std::invalid_argument unless rotation is orthonormal with
    /// determinant +1 to 1e-9.
    Pose3(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

    const Eigen::Matrix3d& rotation() const { return rotation_; }
    const Eigen::Vector3d& translation() const { return translation_; }

    Pose3 inverse() const;
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }
    Eigen::Matrix4d matrix() const;

    /// Composition: (a * b) maps b-local coordinates through b then a.
    friend Pose3 operator*(const Pose3& a, const Pose3& b);

  private:
    Eigen::Matrix3d rotation_;
    Eigen::Vector3d translation_;
};

/// R = Rz(yaw) * Ry(pitch) * Rx(roll), angles in degrees.
Eigen::Matrix3d rotation_zyx(double yaw_deg, double pitch_deg, double roll_deg);

struct EulerZyx {
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    double roll_deg = 0.0;
};

/// Inverse of rotation_zyx (pitch in [-90, 90]; gimbal-locked inputs resolve
/// with roll = 0).
EulerZyx euler_from_rotation(const Eigen::Matrix3d& r);

struct CameraModel {
    double fx = 1100.0;  // focal lengths, pixels
    double fy = 1100.0;
    double cx = 511.5;  // principal point, pixels
    double cy = 383.5;
    int width = 1024;
    int height = 768;
    Pose3 mount;                 // camera pose in the UAV frame
    double exposure_gain = 1.0;  // multiplies rendered source amplitudes

    Eigen::Matrix3d intrinsics() const;

    /// Throws std::invalid_argument on violated invariants
    /// (fx, fy > 0; principal point inside the image; gain > 0).
    void validate() const;
};

/// Camera-frame axes of a forward-looking camera expressed in the UAV frame,
/// pitched down by mount_pitch_deg: optical axis forward/down, image rows
/// toward the ground.
Pose3 forward_camera_mount(double mount_pitch_deg);

/// 3x3 map from ground-plane homogeneous coordinates (x, y, 1) to image
/// homogeneous coordinates. Unnormalized; third coordinate is camera-frame
/// depth, positive in front of the camera.
struct Homography {
    Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
};

struct ImagePoint {
    double u = 0.0;
    double v = 0.0;
    bool visible = false;  // positive depth and inside image bounds
};

/// Precomputes the per-frame constant prefix K * selector * mount^-1 so that
/// per-hypothesis homographies only pay for the UAV pose factor.
class HomographyBuilder {
  public:
    HomographyBuilder(const CameraModel& camera);

    /// Throws DegeneratePose if the camera center lies on the ground plane.
    Homography for_uav_pose(const Pose3& uav_pose) const;

    /// World-frame camera center height above ground for the given UAV pose.
    double camera_height(const Pose3& uav_pose) const;

  private:
    Eigen::Matrix<double, 3, 4> prefix_;
    Pose3 mount_;
};

/// H = K * selector * mount^-1 * uav_pose^-1 * lifter, where the 3x4 selector
/// keeps (x, y, depth) of the camera-frame point and the 4x3 lifter embeds the
/// ground plane z = 0.
Homography make_homography(const CameraModel& camera, const Pose3& uav_pose);

/// One ImagePoint per ground point, in input order. Homogeneous normalization
/// by the third coordinate; non-positive depth or out-of-bounds projections
/// are marked not visible (coordinates then carry no meaning).
std::vector<ImagePoint> project_beacons(const Homography& h,
                                        const std::vector<Eigen::Vector2d>& beacons,
                                        const CameraModel& camera);

}  // namespace beaconsim
