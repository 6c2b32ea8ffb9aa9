#include "warpdecomp/circles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "warpdecomp/errors.hpp"

namespace wpd {

namespace {

constexpr double kStateTol = 1e-9;
constexpr double kCircleClassTol = 1e-9;

}  // namespace

const char* to_string(CircleClass c) noexcept {
  switch (c) {
    case CircleClass::kGeodesic: return "geodesic";
    case CircleClass::kProper: return "proper";
    case CircleClass::kNullCircle: return "null_circle";
  }
  return "unknown";
}

CircleClass classify_circle(const CircleState& s) {
  const Space& sp = s.p.space();
  if (!(s.X.space() == sp) || !(s.Y.space() == sp))
    throw DimensionMismatch("circle: p, X and Y from different spaces");
  if (std::abs(std::abs(sq(s.X)) - 1.0) > kStateTol)
    throw InvalidInput("circle: X must be a unit vector, <X,X> = +-1");
  if (std::abs(inner(s.X, s.Y)) > kStateTol * (1.0 + euclidean_norm(s.Y)))
    throw InvalidInput("circle: Y must be orthogonal to X");
  const double ye = euclidean_dot(s.Y, s.Y);
  if (std::sqrt(ye) <= kCircleClassTol) return CircleClass::kGeodesic;
  if (std::abs(sq(s.Y)) <= kCircleClassTol * ye) return CircleClass::kNullCircle;
  return CircleClass::kProper;
}

double circle_curvature(const CircleState& s) {
  return classify_circle(s) == CircleClass::kProper ? pseudo_norm(s.Y) : 0.0;
}

Vec circle_center(const CircleState& s) {
  if (classify_circle(s) != CircleClass::kProper)
    throw Unsupported("circle_center: only proper circles have a center");
  const double k = pseudo_norm(s.Y);
  const double e = (sq(s.X) > 0 ? 1.0 : -1.0) * (sq(s.Y) > 0 ? 1.0 : -1.0);
  return s.p + (e / (k * k)) * s.Y;
}

Vec circle_closed_form(const CircleState& s, double t) {
  if (classify_circle(s) != CircleClass::kProper)
    throw Unsupported("circle_closed_form: closed form is for proper circles");
  const double k = pseudo_norm(s.Y);
  const Vec ybar = s.Y / k;
  const Vec c = circle_center(s);
  if (sq(s.X) * sq(s.Y) > 0)
    return c + (1.0 / k) * (std::sin(k * t) * s.X - std::cos(k * t) * ybar);
  return c + (1.0 / k) * (std::sinh(k * t) * s.X + std::cosh(k * t) * ybar);
}

Vec circle_exact(const CircleState& s, double t) {
  switch (classify_circle(s)) {
    case CircleClass::kGeodesic: return s.p + t * s.X;
    case CircleClass::kNullCircle: return s.p + t * s.X + (0.5 * t * t) * s.Y;
    case CircleClass::kProper: return circle_closed_form(s, t);
  }
  return s.p;
}

CircleSample circle_exact_state(const CircleState& s, double t) {
  Vec x = s.X, y = s.Y;
  switch (classify_circle(s)) {
    case CircleClass::kGeodesic: break;
    case CircleClass::kNullCircle: x = s.X + t * s.Y; break;
    case CircleClass::kProper: {
      const double k = pseudo_norm(s.Y);
      const Vec ybar = s.Y / k;
      if (sq(s.X) * sq(s.Y) > 0) {
        x = std::cos(k * t) * s.X + std::sin(k * t) * ybar;
        y = k * (std::cos(k * t) * ybar - std::sin(k * t) * s.X);
      } else {
        x = std::cosh(k * t) * s.X + std::sinh(k * t) * ybar;
        y = k * (std::cosh(k * t) * ybar + std::sinh(k * t) * s.X);
      }
      break;
    }
  }
  return {t, circle_exact(s, t), x, y, sq(x), sq(y), inner(x, y)};
}

std::vector<CircleSample> circle_integrate(const CircleState& s, const std::vector<double>& t_grid,
                                           double h) {
  classify_circle(s);
  if (!(h > 0)) throw InvalidInput("circle_integrate: step must be positive");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const bool up = t_grid[1] >= t_grid[0];
    if (up ? t_grid[i] < t_grid[i - 1] : t_grid[i] > t_grid[i - 1])
      throw InvalidInput("circle_integrate: time grid is not monotone");
  }
  Vec p = s.p, X = s.X, Y = s.Y;
  auto accel = [](const Vec& x, const Vec& y) { return (-sq(y) * sq(x)) * x; };
  std::vector<CircleSample> out;
  out.reserve(t_grid.size());
  double t = 0.0;
  for (double target : t_grid) {
    const double span = target - t;
    const int steps = static_cast<int>(std::ceil(std::abs(span) / h));
    const double dt = steps > 0 ? span / steps : 0.0;
    for (int j = 0; j < steps; ++j) {
      const Vec k1p = X, k1x = Y, k1y = accel(X, Y);
      const Vec x2 = X + (0.5 * dt) * k1x, y2 = Y + (0.5 * dt) * k1y;
      const Vec k2p = x2, k2x = y2, k2y = accel(x2, y2);
      const Vec x3 = X + (0.5 * dt) * k2x, y3 = Y + (0.5 * dt) * k2y;
      const Vec k3p = x3, k3x = y3, k3y = accel(x3, y3);
      const Vec x4 = X + dt * k3x, y4 = Y + dt * k3y;
      const Vec k4p = x4, k4x = y4, k4y = accel(x4, y4);
      p += (dt / 6) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      X += (dt / 6) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      Y += (dt / 6) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    }
    t = target;
    out.push_back({target, p, X, Y, sq(X), sq(Y), inner(X, Y)});
  }
  return out;
}

double circle_residual(const std::function<Vec(double)>& gamma, double t, double h) {
  static constexpr double c1[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                  4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
  static constexpr double c2[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                                  8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
  static constexpr double c3[] = {-7.0 / 240, 3.0 / 10,   -169.0 / 120, 61.0 / 30, 0.0,
                                  -61.0 / 30, 169.0 / 120, -3.0 / 10,   7.0 / 240};
  const Vec g0 = gamma(t);
  Vec d1(g0.space()), d2(g0.space()), d3(g0.space());
  for (int j = -4; j <= 4; ++j) {
    const Vec f = gamma(t + j * h);
    const auto k = static_cast<std::size_t>(j + 4);
    d1.axpy(c1[k], f);
    d2.axpy(c2[k], f);
    d3.axpy(c3[k], f);
  }
  d1 = d1 / h;
  d2 = d2 / (h * h);
  d3 = d3 / (h * h * h);
  return euclidean_norm(d3 + (sq(d2) * sq(d1)) * d1);
}

CircleReport sphere_geodesic_is_circle(const SphericalSubmanifold& n, const Vec& p, const Vec& v,
                                       double tolerance, int samples) {
  if (std::abs(std::abs(sq(v)) - 1.0) > kStateTol)
    throw InvalidInput("sphere_geodesic_is_circle: v must be a unit vector");
  if (samples < 1) throw InvalidInput("sphere_geodesic_is_circle: need at least one sample");
  const std::function<Vec(double)> gamma = [&](double t) { return quadric_geodesic(n, p, v, t); };
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.0 : std::numbers::pi * (2.0 * i / (samples - 1) - 1.0);
    worst = std::max(worst, circle_residual(gamma, t));
  }
  return CircleReport{worst, samples, tolerance, worst <= tolerance};
}

}  // namespace wpd
