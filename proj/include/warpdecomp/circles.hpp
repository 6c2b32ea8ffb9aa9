#pragma once

// Circles in flat E^n_nu: unit-speed curves solving
//
//   X' = Y,  Y' = -<Y,Y><X,X> X,
//
// with p' = X. Closed forms for proper circles, fixed-step RK4 and a
// finite-difference residual of the circle equation.

#include <functional>
#include <vector>

#include "warpdecomp/pseudo_linear.hpp"
#include "warpdecomp/spheres.hpp"

namespace wpd {

enum class CircleClass { kGeodesic, kProper, kNullCircle };

const char* to_string(CircleClass c) noexcept;

struct CircleState {
  Vec p;
  Vec X;
  Vec Y;
};

/// Throws InvalidInput unless |<X,X>| = 1 and <X,Y> = 0 (to 1e-9).
CircleClass classify_circle(const CircleState& s);

/// k = sqrt|<Y,Y>|; zero for geodesics and null circles.
double circle_curvature(const CircleState& s);

/// Center c with gamma(0) = p, gamma'(0) = X, gamma''(0) = Y. Proper only.
Vec circle_center(const CircleState& s);

/// gamma(t) for proper circles. Throws Unsupported for the other classes.
Vec circle_closed_form(const CircleState& s, double t);

/// gamma(t) for every class: line, proper circle or p + tX + t^2 Y / 2.
Vec circle_exact(const CircleState& s, double t);

struct CircleSample {
  double t;
  Vec p;
  Vec X;
  Vec Y;
  /// <X,X>, <Y,Y> and <X,Y> of the integrator state.
  double xx;
  double yy;
  double xy;
};

/// Closed-form state (gamma, gamma', gamma'') at t for every class.
CircleSample circle_exact_state(const CircleState& s, double t);

/// RK4 from t = 0 through the grid (monotone), steps of at most h.
std::vector<CircleSample> circle_integrate(const CircleState& s, const std::vector<double>& t_grid,
                                           double h = 1e-3);

/// |gamma''' + <gamma'',gamma''><gamma',gamma'> gamma'|_E at t, derivatives by
/// nine-point central differences with step h.
double circle_residual(const std::function<Vec(double)>& gamma, double t, double h = 3e-2);

struct CircleReport {
  double max_residual;
  int samples;
  double tolerance;
  bool pass;
};

/// Samples quadric_geodesic(n, p, v, .) on [-pi, pi] and reports the largest
/// circle residual. v must be a unit tangent vector.
CircleReport sphere_geodesic_is_circle(const SphericalSubmanifold& n, const Vec& p, const Vec& v,
                                       double tolerance = 1e-5, int samples = 64);

}  // namespace wpd
