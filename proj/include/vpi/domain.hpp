#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vpi/vec3.hpp"

namespace vpi {

/// The excised region Omega, an open bounded set given by a level set
/// Omega = {phi < 0}. Balls work in any dimension; the other shapes are 3-d.
class DomainSpec {
 public:
  struct Ball {
    std::vector<double> center;
    double radius = 0.0;
  };
  struct Ellipsoid {
    Vec3 center{};
    Vec3 semi_axes{};
  };
  struct UnionOfBalls {
    std::vector<Ball> balls;
  };
  struct LevelSet {
    std::function<double(const Vec3&)> phi;
    Vec3 lo{};
    Vec3 hi{};
  };

  static DomainSpec ball(int n, double radius);
  static DomainSpec ball(std::vector<double> center, double radius);
  static DomainSpec ellipsoid(Vec3 semi_axes, Vec3 center = {});
  static DomainSpec union_of_balls(std::vector<Ball> balls);
  /// `lo`/`hi` bound Omega; phi must be negative inside and have a nonzero gradient on the boundary.
  static DomainSpec level_set(std::function<double(const Vec3&)> phi, Vec3 lo, Vec3 hi);

  int n() const noexcept { return n_; }
  std::string shape_name() const;
  const auto& shape() const noexcept { return shape_; }

  /// Level-set value; negative inside Omega. Balls and ellipsoids use (scaled) distance forms.
  double level(const Vec3& x) const;
  bool contains(const Vec3& x) const { return level(x) < 0.0; }
  /// Central-difference gradient of the level set.
  Vec3 level_gradient(const Vec3& x, double step) const;

  std::pair<Vec3, Vec3> bounding_box() const;
  /// max |x| over the closure of Omega.
  double circumradius() const;
  /// Known volume (ball, ellipsoid, union of pairwise disjoint balls).
  std::optional<double> exact_volume() const;
  /// Average of principal curvatures (outward normal) for balls and ellipsoids at a boundary point.
  std::optional<double> closed_form_mean_curvature(const Vec3& x) const;
  bool mirror_symmetric(int axis) const;

  /// Ball centered at the origin; radial scenarios need this.
  bool is_centered_ball() const;
  double ball_radius() const;

 private:
  DomainSpec(int n, std::variant<Ball, Ellipsoid, UnionOfBalls, LevelSet> s)
      : n_(n), shape_(std::move(s)) {}

  int n_;
  std::variant<Ball, Ellipsoid, UnionOfBalls, LevelSet> shape_;
};

}  // namespace vpi
