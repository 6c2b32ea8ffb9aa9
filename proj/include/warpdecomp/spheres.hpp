#pragma once

// Spherical submanifolds (extrinsic spheres) of E^n_nu and of its central
// hyperquadrics, determined by initial data (base point, tangent space, a).
//
//   a = 0          plane        p_bar + V
//   a spacelike    pseudo-sphere       c + {p in W : p^2 = 1/kt}
//   a timelike     pseudo-hyperbolic   c + {p in W : p^2 = 1/kt}
//   a lightlike    paraboloid   p_bar + {v - v^2 a / 2 : v in V}
//
// with kt = a^2, W = R a (+) V and center c = p_bar - a / kt. The mean
// curvature vector at p_bar is z = -a.

#include <optional>
#include <span>
#include <vector>

#include "warpdecomp/pseudo_linear.hpp"

namespace wpd {

enum class SphereKind { kPlane, kPseudoSphere, kPseudoHyperbolic, kParaboloid };

const char* to_string(SphereKind k) noexcept;

struct SphereInitialData {
  Vec base;
  Subspace tangent;
  Vec a;
};

struct SphericalSubmanifold {
  SphereKind kind;
  Vec base;
  Subspace tangent;   // V = T_base N
  Vec a;
  Subspace carrier;   // W; equals V for planes, degenerate R a (+) V for paraboloids
  std::optional<Vec> center;
  double curvature;   // a^2; 0 for planes and paraboloids
  Vec mean_curvature_at_base;  // z = -a
  int dim;            // m
  int index;          // mu
  /// The quadric has two components (anti-isometric to a Euclidean sphere).
  bool disconnected;
  /// When set, membership also requires <a, p - c> > 0 (the component of base).
  bool component_restricted;
};

/// Throws DegenerateSubspace for degenerate V and InvalidInput when a is not
/// orthogonal to V or V is trivial. With `restrict_component`, disconnected
/// quadrics are cut down to the component through the base point.
SphericalSubmanifold classify_sphere(const SphereInitialData& d,
                                     bool restrict_component = true);

/// Initial data for the sphere of E^n_nu(kappa), kappa = 1 / p_bar^2, through
/// p_bar with tangent V and mean curvature z there: a = kappa p_bar - z.
SphereInitialData quadric_sphere_data(const Vec& base, const Subspace& tangent,
                                      const Vec& z);

/// True when the data also determines a sphere of the hyperquadric through
/// its base point: base non-null, V orthogonal to base and <a, base> = 1.
bool restricts_to_quadric(const SphereInitialData& d, double tol = 1e-9);

/// The whole central hyperquadric {p : p^2 = p_bar^2} as a spherical
/// submanifold through p_bar (tangent p_bar^perp, a = p_bar / p_bar^2).
SphericalSubmanifold central_hyperquadric(const Vec& base, bool restrict_component = false);

bool contains(const SphericalSubmanifold& n, const Vec& p, double tol = 1e-9);

/// Chart with base at u = 0. Planes and paraboloids use the coordinates of
/// the stored tangent basis (a global isometry for paraboloids). Quadrics use
/// iterated plane rotations of the radius vector in the planes spanned by it
/// and a pseudo-orthonormal tangent frame: circular on definite planes,
/// hyperbolic on mixed ones. Circular coordinates must lie in [-pi, pi].
Vec parametrize(const SphericalSubmanifold& n, std::span<const double> u);

/// Throws OutOfDomain when p is not on n.
Vec mean_curvature(const SphericalSubmanifold& n, const Vec& p);

/// A basis of T_p N. Throws OutOfDomain when p is not on n.
std::vector<Vec> tangent_basis(const SphericalSubmanifold& n, const Vec& p);

bool is_tangent(const SphericalSubmanifold& n, const Vec& p, const Vec& v,
                double tol = 1e-9);

/// Closed-form geodesic of n with gamma(0) = p, gamma'(0) = v. Throws
/// Unsupported for null v, OutOfDomain when p is off n or v is not tangent.
Vec quadric_geodesic(const SphericalSubmanifold& n, const Vec& p, const Vec& v,
                     double t);

}  // namespace wpd
