#include "hybridreg/synth.hpp"

#include "hybridreg/errors.hpp"
#include "hybridreg/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace hybridreg {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Orthonormal frame: columns are the local x, y, z axes.
Mat3 yaw_frame(double yaw) { return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix(); }

Mat3 yaw_tilt_frame(double yaw, double tilt) {
  return yaw_frame(yaw) * Eigen::AngleAxisd(tilt, Vec3::UnitX()).toRotationMatrix();
}

class SurfaceSampler {
 public:
  SurfaceSampler(Rng& rng, double spacing) : rng_(rng), density_(1.0 / (spacing * spacing)) {}

  // Parallelogram origin + a*u + b*v, a, b in [0, 1].
  void rect(const Point3& origin, const Vec3& u, const Vec3& v) {
    const auto n = count(u.cross(v).norm());
    for (std::size_t i = 0; i < n; ++i) out_.push_back(origin + uniform(rng_, 0, 1) * u + uniform(rng_, 0, 1) * v);
  }

  void triangle(const Point3& a, const Point3& b, const Point3& c) {
    const auto n = count(0.5 * (b - a).cross(c - a).norm());
    for (std::size_t i = 0; i < n; ++i) {
      double s = uniform(rng_, 0, 1), t = uniform(rng_, 0, 1);
      if (s + t > 1) {
        s = 1 - s;
        t = 1 - t;
      }
      out_.push_back(a + s * (b - a) + t * (c - a));
    }
  }

  // Box with base center `base`, extents `dims` along the frame axes. The bottom face is
  // skipped unless `bottom` is set.
  void box(const Point3& base, const Vec3& dims, const Mat3& frame, bool bottom = false) {
    const Vec3 ex = frame.col(0) * dims.x();
    const Vec3 ey = frame.col(1) * dims.y();
    const Vec3 ez = frame.col(2) * dims.z();
    const Point3 c0 = base - 0.5 * ex - 0.5 * ey;
    rect(c0 + ez, ex, ey);
    if (bottom) rect(c0, ex, ey);
    rect(c0, ex, ez);
    rect(c0 + ey, ex, ez);
    rect(c0, ey, ez);
    rect(c0 + ex, ey, ez);
  }

  // Frustum side surface (r0 at the base, r1 at the top) around the frame z axis.
  void frustum(const Point3& base, double r0, double r1, double height, const Mat3& frame, bool cap_top) {
    const double slant = std::hypot(r0 - r1, height);
    const auto n = count(std::numbers::pi * (r0 + r1) * slant);
    const double rmax = std::max(r0, r1);
    std::size_t made = 0;
    while (made < n) {
      const double t = uniform(rng_, 0, 1);
      const double r = r0 + (r1 - r0) * t;
      if (uniform(rng_, 0, rmax) > r) continue;
      const double a = uniform(rng_, 0, 2 * std::numbers::pi);
      out_.push_back(base + frame * Vec3(r * std::cos(a), r * std::sin(a), t * height));
      ++made;
    }
    if (cap_top) disc(base + frame.col(2) * height, r1, frame);
  }

  void cylinder(const Point3& base, double radius, double height, bool cap_top) {
    frustum(base, radius, radius, height, Mat3::Identity(), cap_top);
  }

  void disc(const Point3& center, double radius, const Mat3& frame) {
    const auto n = count(std::numbers::pi * radius * radius);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = uniform(rng_, 0, 2 * std::numbers::pi);
      const double r = radius * std::sqrt(uniform(rng_, 0, 1));
      out_.push_back(center + frame * Vec3(r * std::cos(a), r * std::sin(a), 0));
    }
  }

  void sphere(const Point3& center, double radius) {
    const auto n = count(4 * std::numbers::pi * radius * radius);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 d(g(rng_), g(rng_), g(rng_));
      out_.push_back(center + radius * d.normalized());
    }
  }

  // Ramp rising from height 0 at local -x to `dims.z` at local +x.
  void wedge(const Point3& base, const Vec3& dims, const Mat3& frame) {
    const Vec3 ex = frame.col(0) * dims.x();
    const Vec3 ey = frame.col(1) * dims.y();
    const Vec3 ez = frame.col(2) * dims.z();
    const Point3 c0 = base - 0.5 * ex - 0.5 * ey;
    rect(c0, ex + ez, ey);
    rect(c0 + ex, ey, ez);
    triangle(c0, c0 + ex, c0 + ex + ez);
    triangle(c0 + ey, c0 + ey + ex, c0 + ey + ex + ez);
  }

  PointCloud take() {
    PointCloud c;
    c.points = std::move(out_);
    return c;
  }

 private:
  std::size_t count(double area) const { return static_cast<std::size_t>(std::llround(area * density_)); }

  Rng& rng_;
  double density_;
  std::vector<Point3> out_;
};

struct Footprint {
  double x, y, r;
};

struct Floor {
  double x0, x1, y0, y1;
  std::vector<Footprint> taken;

  // Rejection-samples a free spot for an object of footprint radius r.
  bool place(Rng& rng, double r, double& x, double& y) {
    if (x1 - x0 < 2 * r || y1 - y0 < 2 * r) return false;
    for (int attempt = 0; attempt < 200; ++attempt) {
      x = uniform(rng, x0 + r, x1 - r);
      y = uniform(rng, y0 + r, y1 - r);
      bool ok = true;
      for (const auto& f : taken) {
        if (std::hypot(f.x - x, f.y - y) < f.r + r + 0.05) {
          ok = false;
          break;
        }
      }
      if (ok) {
        taken.push_back({x, y, r});
        return true;
      }
    }
    return false;
  }
};

void clutter_item(SurfaceSampler& s, Rng& rng, const Point3& base) {
  switch (uniform_int(rng, 0, 3)) {
    case 0:
      s.box(base, {uniform(rng, 0.06, 0.16), uniform(rng, 0.06, 0.16), uniform(rng, 0.04, 0.18)},
            yaw_frame(uniform(rng, 0, std::numbers::pi)));
      break;
    case 1: {
      const double r = uniform(rng, 0.04, 0.09);
      s.sphere(base + Vec3(0, 0, r), r);
      break;
    }
    case 2: s.cylinder(base, uniform(rng, 0.03, 0.07), uniform(rng, 0.08, 0.25), true); break;
    default:
      s.frustum(base, uniform(rng, 0.05, 0.09), uniform(rng, 0.02, 0.05), uniform(rng, 0.08, 0.2), Mat3::Identity(),
                true);
      break;
  }
}

void table(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const Vec3 dims(uniform(rng, 0.6, 1.0), uniform(rng, 0.4, 0.7), uniform(rng, 0.03, 0.04));
  const double h = uniform(rng, 0.5, 0.75);
  const Mat3 frame = yaw_frame(uniform(rng, 0, std::numbers::pi));
  double x = 0, y = 0;
  if (!floor.place(rng, 0.5 * std::hypot(dims.x(), dims.y()), x, y)) return;
  const Point3 center(x, y, 0);
  s.box(center + Vec3(0, 0, h), dims, frame, true);
  const double leg_r = uniform(rng, 0.02, 0.03);
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      const Point3 base = center + frame * Vec3(sx * (0.5 * dims.x() - 0.06), sy * (0.5 * dims.y() - 0.06), 0);
      s.cylinder(base, leg_r, h, false);
    }
  }
  const int items = uniform_int(rng, 1, 3);
  for (int i = 0; i < items; ++i) {
    const Vec3 local(uniform(rng, -0.3, 0.3) * dims.x(), uniform(rng, -0.3, 0.3) * dims.y(), h + dims.z());
    clutter_item(s, rng, center + frame * local);
  }
}

void round_table(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const double r = uniform(rng, 0.3, 0.45), h = uniform(rng, 0.45, 0.7);
  double x = 0, y = 0;
  if (!floor.place(rng, r, x, y)) return;
  const Point3 c(x, y, 0);
  s.disc(c, uniform(rng, 0.15, 0.22), Mat3::Identity());
  s.cylinder(c, uniform(rng, 0.03, 0.05), h, false);
  s.frustum(c + Vec3(0, 0, h), r, r, 0.03, Mat3::Identity(), true);
  s.disc(c + Vec3(0, 0, h), r, Mat3::Identity());
  if (uniform(rng, 0, 1) < 0.7) clutter_item(s, rng, c + Vec3(uniform(rng, -0.1, 0.1), 0, h + 0.03));
}

void chair(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const double w = uniform(rng, 0.4, 0.5), h = uniform(rng, 0.42, 0.48);
  double x = 0, y = 0;
  if (!floor.place(rng, 0.4, x, y)) return;
  const double yaw = uniform(rng, 0, 2 * std::numbers::pi);
  const Mat3 frame = yaw_frame(yaw);
  const Point3 c(x, y, 0);
  s.box(c + Vec3(0, 0, h), {w, w, 0.04}, frame, true);
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) s.cylinder(c + frame * Vec3(sx * (0.5 * w - 0.03), sy * (0.5 * w - 0.03), 0), 0.015, h, false);
  }
  const double tilt = uniform(rng, 0.1, 0.3);
  const Mat3 back = yaw_tilt_frame(yaw, -tilt);
  s.box(c + frame * Vec3(0, 0.5 * w, h + 0.04), {w, 0.03, uniform(rng, 0.35, 0.5)}, back, true);
}

void sofa(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const double len = uniform(rng, 1.2, 1.8), depth = uniform(rng, 0.7, 0.9);
  double x = 0, y = 0;
  if (!floor.place(rng, 0.5 * std::hypot(len, depth), x, y)) return;
  const Mat3 frame = yaw_frame(uniform(rng, 0, 2 * std::numbers::pi));
  const Point3 c(x, y, 0);
  const double seat = uniform(rng, 0.35, 0.45), arm = uniform(rng, 0.12, 0.2);
  s.box(c, {len - 2 * arm, depth - 0.2, seat}, frame);
  s.box(c + frame * Vec3(0, 0.5 * depth - 0.1, 0), {len, 0.2, uniform(rng, 0.7, 0.85)}, frame);
  for (int sx : {-1, 1}) {
    s.box(c + frame * Vec3(sx * (0.5 * len - 0.5 * arm), -0.1, 0), {arm, depth - 0.2, seat + 0.15}, frame);
  }
}

void lamp(SurfaceSampler& s, Rng& rng, Floor& floor) {
  double x = 0, y = 0;
  if (!floor.place(rng, 0.25, x, y)) return;
  const Point3 c(x, y, 0);
  const double h = uniform(rng, 1.0, 1.5);
  s.disc(c, uniform(rng, 0.12, 0.18), Mat3::Identity());
  s.cylinder(c, 0.015, h, false);
  s.frustum(c + Vec3(0, 0, h - 0.1), uniform(rng, 0.15, 0.22), uniform(rng, 0.06, 0.1), uniform(rng, 0.18, 0.3),
            Mat3::Identity(), false);
}

void cabinet(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const Vec3 dims(uniform(rng, 0.3, 0.8), uniform(rng, 0.3, 0.6), uniform(rng, 0.3, 0.9));
  double x = 0, y = 0;
  if (!floor.place(rng, 0.5 * std::hypot(dims.x(), dims.y()), x, y)) return;
  const Mat3 frame = yaw_frame(uniform(rng, 0, std::numbers::pi));
  s.box({x, y, 0}, dims, frame);
  if (uniform(rng, 0, 1) < 0.6) clutter_item(s, rng, Point3(x, y, dims.z()) + frame * Vec3(0.1 * dims.x(), 0, 0));
}

void ball(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const double r = uniform(rng, 0.1, 0.25);
  double x = 0, y = 0;
  if (floor.place(rng, r, x, y)) s.sphere({x, y, r}, r);
}

void ramp(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const Vec3 dims(uniform(rng, 0.4, 0.8), uniform(rng, 0.3, 0.6), uniform(rng, 0.15, 0.4));
  double x = 0, y = 0;
  if (floor.place(rng, 0.5 * std::hypot(dims.x(), dims.y()), x, y)) {
    s.wedge({x, y, 0}, dims, yaw_frame(uniform(rng, 0, 2 * std::numbers::pi)));
  }
}

void bin(SurfaceSampler& s, Rng& rng, Floor& floor) {
  const double r = uniform(rng, 0.12, 0.22);
  double x = 0, y = 0;
  if (floor.place(rng, r, x, y)) s.cylinder({x, y, 0}, r, uniform(rng, 0.3, 0.6), uniform(rng, 0, 1) < 0.5);
}

// Pillar in a back corner, shelf on the back wall (y = y1) and a board leaning on the
// x = x1 wall (or x = x0 when `board_left`).
void wall_items(SurfaceSampler& s, Rng& rng, Floor& floor, double h, bool board_left) {
  const double x0 = floor.x0, x1 = floor.x1, y0 = floor.y0, y1 = floor.y1;
  const double pw = uniform(rng, 0.2, 0.35);
  const double px = board_left ? x1 - 0.5 * pw : x0 + 0.5 * pw;
  s.box({px, y1 - 0.5 * pw, 0}, {pw, pw, h}, Mat3::Identity());
  floor.taken.push_back({px, y1 - 0.5 * pw, 0.75 * pw});
  const double sw = uniform(rng, 0.6, 1.0);
  s.box({uniform(rng, x0 + sw, x1 - sw), y1 - 0.12, uniform(rng, 0.7, 1.1)}, {sw, 0.24, 0.025}, Mat3::Identity(),
        true);
  const double lean = uniform(rng, 0.15, 0.35);
  const double bh = uniform(rng, 0.8, 1.1);
  const double by = uniform(rng, y0 + 0.5, y1 - 0.8);
  const double foot = bh * std::sin(lean) + 0.02;
  const double bx = board_left ? x0 + foot : x1 - foot;
  const Mat3 board = yaw_tilt_frame(board_left ? -std::numbers::pi / 2 : std::numbers::pi / 2, lean);
  s.box({bx, by, 0}, {uniform(rng, 0.4, 0.7), 0.02, bh}, board, true);
  floor.taken.push_back({bx, by, 0.4});
}

void floor_and_back_wall(SurfaceSampler& s, const Floor& f, double h) {
  s.rect({f.x0, f.y0, 0}, {f.x1 - f.x0, 0, 0}, {0, f.y1 - f.y0, 0});
  s.rect({f.x0, f.y1, 0}, {f.x1 - f.x0, 0, 0}, {0, 0, h});
}

void side_wall(SurfaceSampler& s, double x, double y0, double y1, double h) {
  s.rect({x, y0, 0}, {0, y1 - y0, 0}, {0, 0, h});
}

void furnish(SurfaceSampler& s, Rng& rng, Floor& floor) {
  using Maker = void (*)(SurfaceSampler&, Rng&, Floor&);
  static constexpr Maker makers[] = {table, round_table, chair, sofa, lamp, cabinet, ball, ramp, bin};
  const int n = uniform_int(rng, 7, 10);
  for (int i = 0; i < n; ++i) makers[uniform_int(rng, 0, static_cast<int>(std::size(makers)) - 1)](s, rng, floor);
  const int clutter = uniform_int(rng, 2, 4);
  for (int i = 0; i < clutter; ++i) {
    double x = 0, y = 0;
    if (floor.place(rng, 0.12, x, y)) clutter_item(s, rng, {x, y, 0});
  }
}

PointCloud build_scene(SceneRecipe recipe, Rng& rng, double spacing) {
  SurfaceSampler s(rng, spacing);
  switch (recipe) {
    case SceneRecipe::Room: {
      const double w = uniform(rng, 2.6, 3.6), d = uniform(rng, 2.6, 3.6), h = uniform(rng, 1.2, 1.6);
      Floor floor{-w / 2, w / 2, -d / 2, d / 2, {}};
      floor_and_back_wall(s, floor, h);
      side_wall(s, floor.x0, floor.y0, floor.y1, h);
      side_wall(s, floor.x1, floor.y0, floor.y1, h);
      wall_items(s, rng, floor, h, uniform(rng, 0, 1) < 0.5);
      furnish(s, rng, floor);
      break;
    }
    case SceneRecipe::TwoRooms: {
      const double w = uniform(rng, 2.0, 2.8), d = uniform(rng, 2.6, 3.2), h = uniform(rng, 1.2, 1.5);
      Floor left{-w, -0.05, -d / 2, d / 2, {}};
      Floor right{0.05, w, -d / 2, d / 2, {}};
      floor_and_back_wall(s, Floor{-w, w, -d / 2, d / 2, {}}, h);
      side_wall(s, -w, -d / 2, d / 2, h);
      side_wall(s, w, -d / 2, d / 2, h);
      // Shared wall with a 0.9 m doorway.
      const double door = uniform(rng, -d / 2 + 0.3, d / 2 - 1.2);
      side_wall(s, 0, -d / 2, door, h);
      side_wall(s, 0, door + 0.9, d / 2, h);
      left.taken.push_back({-0.3, door + 0.45, 0.5});
      right.taken.push_back({0.3, door + 0.45, 0.5});
      wall_items(s, rng, left, h, true);
      wall_items(s, rng, right, h, false);
      furnish(s, rng, left);
      furnish(s, rng, right);
      break;
    }
    case SceneRecipe::PlaneDominant: {
      const double w = uniform(rng, 2.6, 3.6), d = uniform(rng, 2.6, 3.6), h = uniform(rng, 1.2, 1.6);
      s.rect({-w / 2, -d / 2, 0}, {w, 0, 0}, {0, d, 0});
      s.rect({-w / 2, d / 2, 0}, {w, 0, 0}, {0, 0, h});
      s.rect({-w / 2, -d / 2, 0}, {0, d, 0}, {0, 0, h});
      Floor floor{-w / 2, w / 2, -d / 2, d / 2, {}};
      const int boxes = uniform_int(rng, 1, 2);
      for (int i = 0; i < boxes; ++i) {
        const Vec3 dims(uniform(rng, 0.6, 1.0), uniform(rng, 0.5, 0.9), uniform(rng, 0.4, 0.7));
        double x = 0, y = 0;
        if (!floor.place(rng, 0.5 * std::hypot(dims.x(), dims.y()), x, y)) continue;
        s.box({x, y, 0}, dims, yaw_frame(uniform(rng, 0, std::numbers::pi)));
      }
      break;
    }
  }
  return s.take();
}

std::vector<double> azimuths(const PointCloud& cloud) {
  Point3 lo = cloud.points.front(), hi = lo;
  for (const auto& p : cloud.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Point3 c = 0.5 * (lo + hi);
  std::vector<double> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points) out.push_back(std::atan2(p.y() - c.y(), p.x() - c.x()));
  return out;
}

bool in_window(double az, double start, double width) {
  const double two_pi = 2 * std::numbers::pi;
  double rel = std::fmod(az - start, two_pi);
  if (rel < 0) rel += two_pi;
  return rel <= width;
}

}  // namespace

SceneRecipe parse_recipe(std::string_view name) {
  if (name == "room") return SceneRecipe::Room;
  if (name == "two-rooms") return SceneRecipe::TwoRooms;
  if (name == "plane-dominant") return SceneRecipe::PlaneDominant;
  throw ConfigError("unknown scene recipe '" + std::string(name) + "'");
}

std::string to_string(SceneRecipe recipe) {
  switch (recipe) {
    case SceneRecipe::Room: return "room";
    case SceneRecipe::TwoRooms: return "two-rooms";
    case SceneRecipe::PlaneDominant: return "plane-dominant";
  }
  return "room";
}

PointCloud sample_scene(SceneRecipe recipe, std::uint64_t seed, double spacing) {
  if (!(spacing > 0)) throw ConfigError("scene spacing must be positive");
  Rng rng(seed);
  return build_scene(recipe, rng, spacing);
}

ScenePair synth_pair(SceneRecipe recipe, const RigidTransform& t, double overlap, double noise_sigma,
                     std::uint64_t seed, double spacing) {
  if (!(overlap > 0 && overlap <= 1)) throw GenerationError("overlap must lie in (0, 1]");
  if (noise_sigma < 0) throw GenerationError("noise sigma must be non-negative");
  Rng rng(seed);
  const PointCloud scene = build_scene(recipe, rng, spacing);
  const auto az = azimuths(scene);

  const double width = 200.0 * std::numbers::pi / 180.0;
  const double start = uniform(rng, -std::numbers::pi, std::numbers::pi);
  std::vector<std::size_t> src_ids;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    if (in_window(az[i], start, width)) src_ids.push_back(i);
  }
  if (src_ids.empty()) throw GenerationError("empty source view");

  auto shared_fraction = [&](double shift) {
    std::size_t shared = 0;
    for (auto i : src_ids) shared += in_window(az[i], start + shift, width) ? 1 : 0;
    return static_cast<double>(shared) / static_cast<double>(src_ids.size());
  };
  // Shared fraction decreases as the second view swings away. A wall seen edge-on makes the
  // curve jump, so when one swing direction misses the target the other one is tried.
  auto bisect = [&](double sign) {
    double lo = 0.0, hi = width;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (shared_fraction(sign * mid) > overlap ? lo : hi) = mid;
    }
    return sign * 0.5 * (lo + hi);
  };
  double shift = 0.0;
  double achieved = 1.0;
  if (overlap < 1.0) {
    shift = bisect(1.0);
    achieved = shared_fraction(shift);
    if (std::abs(achieved - overlap) > 0.05) {
      const double other = bisect(-1.0);
      const double other_achieved = shared_fraction(other);
      if (std::abs(other_achieved - overlap) < std::abs(achieved - overlap)) {
        shift = other;
        achieved = other_achieved;
      }
    }
  }
  if (std::abs(achieved - overlap) > 0.05) {
    throw GenerationError("requested overlap " + std::to_string(overlap) + " unreachable (got " +
                          std::to_string(achieved) + ")");
  }

  ScenePair pair;
  pair.t_gt = t;
  pair.gt_overlap = achieved;
  pair.noise_sigma = noise_sigma;
  pair.recipe = recipe;
  pair.seed = seed;
  std::normal_distribution<double> noise(0.0, 1.0);
  auto jitter = [&]() {
    if (noise_sigma == 0.0) return Vec3(Vec3::Zero());
    Vec3 n;
    n.x() = noise(rng);
    n.y() = noise(rng);
    n.z() = noise(rng);
    return Vec3(noise_sigma * n);
  };
  for (auto i : src_ids) pair.source.points.push_back(scene.points[i] + jitter());
  for (std::size_t i = 0; i < scene.size(); ++i) {
    if (in_window(az[i], start + shift, width)) pair.target.points.push_back(t.apply(scene.points[i]) + jitter());
  }
  return pair;
}

double measure_overlap(const PointCloud& source, const PointCloud& target, const RigidTransform& t_gt,
                       double radius) {
  if (source.empty() || target.empty()) return 0.0;
  const KdTree tree(target);
  std::size_t hits = 0;
  for (const auto& p : source.points) hits += tree.nearest(t_gt.apply(p)).distance < radius ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(source.size());
}

RigidTransform random_transform(std::mt19937_64& rng, double max_angle_deg, double max_translation) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 axis;
  do {
    axis = Vec3(g(rng), g(rng), g(rng));
  } while (axis.norm() < 1e-9);
  const double angle = uniform(rng, 0.0, max_angle_deg) * std::numbers::pi / 180.0;
  const Vec3 t(uniform(rng, -max_translation, max_translation), uniform(rng, -max_translation, max_translation),
               uniform(rng, -max_translation, max_translation));
  return RigidTransform::from_axis_angle(axis, angle, t);
}

}  // namespace hybridreg
