#include "beaconsim/render.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "beaconsim/mathutil.hpp"
#include "beaconsim/rng.hpp"

namespace beaconsim {

namespace {

// Stationary Gaussian random field: sum of a few low-frequency cos/sin pairs
// with N(0,1) coefficients. Pointwise exactly N(0,1); spatially smooth so the
// detector sees slowly varying background illumination rather than per-pixel
// shot noise. Evaluated separably.
void add_background(std::vector<double>& buf, int w, int h, double mean, double sigma, Rng& rng) {
    constexpr int kComponents = 4;
    struct Component {
        double a, b, wx, wy;
    };
    std::vector<Component> comps(kComponents);
    const double extent = static_cast<double>(std::max(w, h));
    for (Component& c : comps) {
        const double wavelength = extent * rng.uniform(0.7, 2.0);
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const double omega = 2.0 * kPi / wavelength;
        c.wx = omega * std::cos(theta);
        c.wy = omega * std::sin(theta);
        c.a = rng.normal();
        c.b = rng.normal();
    }
    const double scale = sigma / std::sqrt(static_cast<double>(kComponents));

    // a*cos(wx*x + wy*y) + b*sin(...) = cos(wy*y)*P[x] + sin(wy*y)*Q[x]
    std::vector<double> px(static_cast<std::size_t>(w) * kComponents);
    std::vector<double> qx(static_cast<std::size_t>(w) * kComponents);
    for (int i = 0; i < kComponents; ++i) {
        for (int x = 0; x < w; ++x) {
            const double c = std::cos(comps[i].wx * x), s = std::sin(comps[i].wx * x);
            px[static_cast<std::size_t>(i) * w + x] = comps[i].a * c + comps[i].b * s;
            qx[static_cast<std::size_t>(i) * w + x] = -comps[i].a * s + comps[i].b * c;
        }
    }
    for (int y = 0; y < h; ++y) {
        double* row = buf.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) row[x] = mean;
        for (int i = 0; i < kComponents; ++i) {
            const double cy = std::cos(comps[i].wy * y), sy = std::sin(comps[i].wy * y);
            const double* p = px.data() + static_cast<std::size_t>(i) * w;
            const double* q = qx.data() + static_cast<std::size_t>(i) * w;
            for (int x = 0; x < w; ++x) row[x] += scale * (cy * p[x] + sy * q[x]);
        }
    }
}

void splat_blob(std::vector<double>& buf, int w, int h, double u, double v, double amp,
                double sigma) {
    if (amp <= 0.0) return;
    // Render out to where the tail drops below a quarter quantization step.
    const double cutoff = 2.0 * std::log(amp / 0.25);
    if (cutoff <= 0.0) return;
    const double radius = sigma * std::sqrt(cutoff);
    const int x0 = std::max(0, static_cast<int>(std::ceil(u - radius)));
    const int x1 = std::min(w - 1, static_cast<int>(std::floor(u + radius)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(v - radius)));
    const int y1 = std::min(h - 1, static_cast<int>(std::floor(v + radius)));
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int y = y0; y <= y1; ++y) {
        const double dy2 = (y - v) * (y - v);
        double* row = buf.data() + static_cast<std::size_t>(y) * w;
        for (int x = x0; x <= x1; ++x) {
            const double r2 = (x - u) * (x - u) + dy2;
            row[x] += amp * std::exp(-r2 * inv2s2);
        }
    }
}

}  // namespace

GrayImage render_frame(const CameraModel& camera, const Pose3& truth_pose,
                       const BeaconMap& beacons, const SceneRenderConfig& cfg,
                       std::uint64_t seed) {
    if (!(cfg.psf_sigma_px > 0.0)) throw std::invalid_argument("psf sigma must be positive");
    if (cfg.background_sigma < 0.0 || cfg.clutter_rate < 0.0)
        throw std::invalid_argument("background sigma and clutter rate must be nonnegative");

    const int w = camera.width, h = camera.height;
    Rng rng(seed);
    std::vector<double> buf(static_cast<std::size_t>(w) * h, 0.0);

    if (cfg.background_sigma > 0.0) {
        add_background(buf, w, h, cfg.background_mean, cfg.background_sigma, rng);
    } else {
        std::fill(buf.begin(), buf.end(), cfg.background_mean);
    }

    // Beacons: inverse-square amplitude from the camera center.
    const HomographyBuilder builder(camera);
    const Homography hom = builder.for_uav_pose(truth_pose);
    const Eigen::Vector3d cam_center = (truth_pose * camera.mount).translation();
    const std::vector<ImagePoint> pts = project_beacons(hom, beacons.positions, camera);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!pts[i].visible) continue;
        const Eigen::Vector3d beacon(beacons.positions[i].x(), beacons.positions[i].y(), 0.0);
        const double range2 = (beacon - cam_center).squaredNorm();
        const double amp = camera.exposure_gain * cfg.beacon_power / range2;
        splat_blob(buf, w, h, pts[i].u, pts[i].v, amp, cfg.psf_sigma_px);
    }

    // Clutter: draw order is fixed so frames at two gains share a scene.
    const int n_clutter = rng.poisson(cfg.clutter_rate);
    for (int i = 0; i < n_clutter; ++i) {
        const double u = rng.uniform(0.0, static_cast<double>(w));
        const double v = rng.uniform(0.0, static_cast<double>(h));
        const double amp =
            camera.exposure_gain * rng.uniform(cfg.clutter_power_min, cfg.clutter_power_max);
        splat_blob(buf, w, h, u, v, amp, cfg.psf_sigma_px);
    }

    GrayImage img(w, h);
    for (std::size_t i = 0; i < buf.size(); ++i) {
        const long q = std::lround(buf[i]);
        img.pixels[i] = static_cast<std::uint8_t>(std::clamp<long>(q, 0, cfg.saturation));
    }
    return img;
}

int max_saturated_component(const GrayImage& img, std::uint8_t saturated) {
    const int w = img.width, h = img.height;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    int best = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (seen[idx] || img.pixels[idx] != saturated) continue;
            int area = 0;
            seen[idx] = 1;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++area;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                        if (!seen[nidx] && img.pixels[nidx] == saturated) {
                            seen[nidx] = 1;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
            best = std::max(best, area);
        }
    }
    return best;
}

double auto_exposure(const CameraModel& camera,
                     const std::function<GrayImage(double)>& probe,
                     int max_sat_component_px, GainBounds bounds) {
    (void)camera;
    if (!(bounds.lo > 0.0) || !(bounds.hi >= bounds.lo))
        throw std::invalid_argument("invalid gain bounds");
    const auto feasible = [&](double gain) {
        return max_saturated_component(probe(gain)) <= max_sat_component_px;
    };
    if (feasible(bounds.hi)) return bounds.hi;
    if (!feasible(bounds.lo))
        throw NoFeasibleGain("saturated components exceed the bound even at the lowest gain");
    double lo = bounds.lo, hi = bounds.hi;  // lo feasible, hi not
    while (hi - lo > 1e-3 * lo) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace beaconsim
