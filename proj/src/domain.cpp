#include "vpi/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"

namespace vpi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_ball(const DomainSpec::Ball& b, std::size_t n, const std::string& where) {
  if (!(b.radius > 0.0)) throw InputError(where + ".radius must be positive");
  if (b.center.size() != n) throw InputError(where + ".center has the wrong dimension");
}

double ball_level(const DomainSpec::Ball& b, const Vec3& x) {
  double r2 = 0.0;
  for (int i = 0; i < 3; ++i) r2 += (x[i] - b.center[i]) * (x[i] - b.center[i]);
  return std::sqrt(r2) - b.radius;
}

}  // namespace

DomainSpec DomainSpec::ball(int n, double radius) {
  if (n < 3) throw InputError("dimension must be >= 3");
  return ball(std::vector<double>(n, 0.0), radius);
}

DomainSpec DomainSpec::ball(std::vector<double> center, double radius) {
  const int n = static_cast<int>(center.size());
  if (n < 3) throw InputError("dimension must be >= 3");
  Ball b{std::move(center), radius};
  require_ball(b, n, "ball");
  return DomainSpec(n, std::move(b));
}

DomainSpec DomainSpec::ellipsoid(Vec3 semi_axes, Vec3 center) {
  for (double a : semi_axes) {
    if (!(a > 0.0)) throw InputError("ellipsoid semi-axes must be positive");
  }
  return DomainSpec(3, Ellipsoid{center, semi_axes});
}

DomainSpec DomainSpec::union_of_balls(std::vector<Ball> balls) {
  if (balls.empty()) throw InputError("union of balls must contain at least one ball");
  for (std::size_t i = 0; i < balls.size(); ++i) {
    require_ball(balls[i], 3, "balls[" + std::to_string(i) + "]");
  }
  return DomainSpec(3, UnionOfBalls{std::move(balls)});
}

DomainSpec DomainSpec::level_set(std::function<double(const Vec3&)> phi, Vec3 lo, Vec3 hi) {
  if (!phi) throw InputError("level set function is empty");
  for (int a = 0; a < 3; ++a) {
    if (!(hi[a] > lo[a])) throw InputError("level set bounding box is empty");
  }
  return DomainSpec(3, LevelSet{std::move(phi), lo, hi});
}

std::string DomainSpec::shape_name() const {
  return std::visit(overloaded{
                        [](const Ball&) { return std::string("ball"); },
                        [](const Ellipsoid&) { return std::string("ellipsoid"); },
                        [](const UnionOfBalls&) { return std::string("union_of_balls"); },
                        [](const LevelSet&) { return std::string("level_set"); },
                    },
                    shape_);
}

double DomainSpec::level(const Vec3& x) const {
  return std::visit(overloaded{
                        [&](const Ball& b) {
                          if (n_ != 3) throw InputError("3-d evaluation of a higher-dimensional ball");
                          return ball_level(b, x);
                        },
                        [&](const Ellipsoid& e) {
                          double q = 0.0;
                          for (int i = 0; i < 3; ++i) {
                            const double s = (x[i] - e.center[i]) / e.semi_axes[i];
                            q += s * s;
                          }
                          return std::sqrt(q) - 1.0;
                        },
                        [&](const UnionOfBalls& u) {
                          double best = std::numeric_limits<double>::infinity();
                          for (const auto& b : u.balls) best = std::min(best, ball_level(b, x));
                          return best;
                        },
                        [&](const LevelSet& l) { return l.phi(x); },
                    },
                    shape_);
}

Vec3 DomainSpec::level_gradient(const Vec3& x, double step) const {
  Vec3 g{};
  for (int a = 0; a < 3; ++a) {
    Vec3 xp = x;
    Vec3 xm = x;
    xp[a] += step;
    xm[a] -= step;
    g[a] = (level(xp) - level(xm)) / (2.0 * step);
  }
  return g;
}

std::pair<Vec3, Vec3> DomainSpec::bounding_box() const {
  return std::visit(
      overloaded{
          [](const Ball& b) {
            Vec3 lo{}, hi{};
            for (int i = 0; i < 3 && i < static_cast<int>(b.center.size()); ++i) {
              lo[i] = b.center[i] - b.radius;
              hi[i] = b.center[i] + b.radius;
            }
            return std::pair{lo, hi};
          },
          [](const Ellipsoid& e) { return std::pair{e.center - e.semi_axes, e.center + e.semi_axes}; },
          [](const UnionOfBalls& u) {
            const double inf = std::numeric_limits<double>::infinity();
            Vec3 lo{inf, inf, inf}, hi{-inf, -inf, -inf};
            for (const auto& b : u.balls) {
              for (int i = 0; i < 3; ++i) {
                lo[i] = std::min(lo[i], b.center[i] - b.radius);
                hi[i] = std::max(hi[i], b.center[i] + b.radius);
              }
            }
            return std::pair{lo, hi};
          },
          [](const LevelSet& l) { return std::pair{l.lo, l.hi}; },
      },
      shape_);
}

double DomainSpec::circumradius() const {
  return std::visit(overloaded{
                        [](const Ball& b) { return norm(b.center) + b.radius; },
                        [](const Ellipsoid& e) {
                          return norm(e.center) +
                                 std::max({e.semi_axes[0], e.semi_axes[1], e.semi_axes[2]});
                        },
                        [](const UnionOfBalls& u) {
                          double r = 0.0;
                          for (const auto& b : u.balls) r = std::max(r, norm(b.center) + b.radius);
                          return r;
                        },
                        [](const LevelSet& l) {
                          double r2 = 0.0;
                          for (int i = 0; i < 3; ++i) {
                            const double m = std::max(std::abs(l.lo[i]), std::abs(l.hi[i]));
                            r2 += m * m;
                          }
                          return std::sqrt(r2);
                        },
                    },
                    shape_);
}

std::optional<double> DomainSpec::exact_volume() const {
  return std::visit(
      overloaded{
          [&](const Ball& b) -> std::optional<double> {
            return ball_volume(n_) * std::pow(b.radius, n_);
          },
          [](const Ellipsoid& e) -> std::optional<double> {
            return 4.0 / 3.0 * std::numbers::pi * e.semi_axes[0] * e.semi_axes[1] * e.semi_axes[2];
          },
          [](const UnionOfBalls& u) -> std::optional<double> {
            double v = 0.0;
            for (std::size_t i = 0; i < u.balls.size(); ++i) {
              for (std::size_t j = i + 1; j < u.balls.size(); ++j) {
                Vec3 d{};
                for (int k = 0; k < 3; ++k) d[k] = u.balls[i].center[k] - u.balls[j].center[k];
                if (norm(d) < u.balls[i].radius + u.balls[j].radius) return std::nullopt;
              }
              v += 4.0 / 3.0 * std::numbers::pi * std::pow(u.balls[i].radius, 3);
            }
            return v;
          },
          [](const LevelSet&) -> std::optional<double> { return std::nullopt; },
      },
      shape_);
}

std::optional<double> DomainSpec::closed_form_mean_curvature(const Vec3& x) const {
  return std::visit(overloaded{
                        [](const Ball& b) -> std::optional<double> { return 1.0 / b.radius; },
                        [&](const Ellipsoid& e) -> std::optional<double> {
                          // H = (a^2 + b^2 + c^2 - |y|^2) / (2 a^2 b^2 c^2 (sum y_i^2/a_i^4)^{3/2})
                          // with y = x - center, the average of the principal curvatures.
                          const Vec3 y = x - e.center;
                          const auto& a = e.semi_axes;
                          double s = 0.0;
                          double a2 = 0.0;
                          double prod = 1.0;
                          for (int i = 0; i < 3; ++i) {
                            s += y[i] * y[i] / std::pow(a[i], 4);
                            a2 += a[i] * a[i];
                            prod *= a[i] * a[i];
                          }
                          return (a2 - dot(y, y)) / (2.0 * prod * std::pow(s, 1.5));
                        },
                        [](const UnionOfBalls&) -> std::optional<double> { return std::nullopt; },
                        [](const LevelSet&) -> std::optional<double> { return std::nullopt; },
                    },
                    shape_);
}

bool DomainSpec::mirror_symmetric(int axis) const {
  return std::visit(overloaded{
                        [&](const Ball& b) { return b.center[axis] == 0.0; },
                        [&](const Ellipsoid& e) { return e.center[axis] == 0.0; },
                        [&](const UnionOfBalls& u) {
                          for (const auto& b : u.balls) {
                            auto m = b.center;
                            m[axis] = -m[axis];
                            const bool found =
                                std::any_of(u.balls.begin(), u.balls.end(), [&](const Ball& q) {
                                  return q.radius == b.radius && q.center == m;
                                });
                            if (!found) return false;
                          }
                          return true;
                        },
                        [](const LevelSet&) { return false; },
                    },
                    shape_);
}

bool DomainSpec::is_centered_ball() const {
  const auto* b = std::get_if<Ball>(&shape_);
  return b && std::all_of(b->center.begin(), b->center.end(), [](double c) { return c == 0.0; });
}

double DomainSpec::ball_radius() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->radius;
  throw InputError("domain is not a ball");
}

}  // namespace vpi
