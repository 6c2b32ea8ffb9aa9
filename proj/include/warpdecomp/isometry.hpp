#pragma once

// Isometries of the paraboloid P^n_nu and lifts of factor isometries through
// warped products.
//
// A paraboloid model is a non-degenerate subspace V of an ambient space and a
// lightlike pair a, b orthogonal to V with <a,b> = 1. It embeds V as
//
//   psi(x) = b + x - x^2 a / 2.
//
// The pair (B, v), B pseudo-orthogonal on V and v in V, acts on the whole
// ambient space by the linear map
//
//   T(p + p~) = p~ + B p + <a,p~> v - (<Bp,v> + <a,p~> v^2 / 2) a,
//
// p in V, p~ in V^perp, which fixes a and satisfies psi(Bx + v) = T psi(x).

#include <cstdint>
#include <functional>
#include <optional>

#include "warpdecomp/matrix.hpp"
#include "warpdecomp/pseudo_linear.hpp"
#include "warpdecomp/warp.hpp"

namespace wpd {

inline constexpr double kIsometryTol = 1e-9;

struct ParaboloidModel {
  Subspace v;
  Vec a;
  Vec b;
  /// Set for the standard model of E^n_nu: coordinate j maps to j + 1.
  std::optional<Space> base_space;

  const Space& space() const noexcept { return v.space(); }
};

/// Throws InvalidInput unless a, b is a lightlike pair with <a,b> = 1, both
/// orthogonal to V, and DegenerateSubspace for degenerate V.
ParaboloidModel paraboloid_model(const Subspace& v, const Vec& a, const Vec& b);

/// E^n_nu inside E^{n+2}_{nu+1}: a new timelike axis 0 and spacelike axis
/// n + 1, a = e_0 + e_{n+1}, b = (e_{n+1} - e_0) / 2.
ParaboloidModel standard_paraboloid_model(const Space& base);

/// Base vector into V (standard model only).
Vec standard_lift(const ParaboloidModel& m, const Vec& x);
/// Linear map of the base space as an ambient matrix acting on V.
Matrix standard_lift(const ParaboloidModel& m, const Matrix& b);

/// psi(x) = b + x - x^2 a / 2 for x in V.
Vec paraboloid_embed(const ParaboloidModel& m, const Vec& x);

/// Ambient orthogonal projection onto V.
Matrix projector(const ParaboloidModel& m);

struct ParaboloidIsometry {
  ParaboloidModel model;
  /// Ambient matrix with B = B P, mapping V to V.
  Matrix B;
  Vec v;

  Vec act(const Vec& x) const;  // Bx + v on V
};

/// Throws InvalidInput when B does not map V pseudo-orthogonally into V (to
/// 1e-9) or v is not in V. B may be given on the whole ambient space; only
/// its action on V is kept.
ParaboloidIsometry paraboloid_isometry(const ParaboloidModel& m, const Matrix& b, const Vec& v);

ParaboloidIsometry identity_isometry(const ParaboloidModel& m);

/// The ambient map T above.
Matrix realize(const ParaboloidIsometry& iso);

/// (B1 B2, v1 + B1 v2). Throws InvalidInput for different models.
ParaboloidIsometry compose_isometries(const ParaboloidIsometry& i1, const ParaboloidIsometry& i2);

/// (P T|_V, P T b). Throws InvalidInput unless T is pseudo-orthogonal and
/// fixes a (to 1e-9). Meant for maps produced by realize.
ParaboloidIsometry decode(const ParaboloidModel& m, const Matrix& t);

struct EquivarianceReport {
  double max_error;
  double scale;
  int samples;
  bool pass;
};

/// max |psi(Bx + v) - T psi(x)|_E over seeded x in V; passes at
/// 1e-9 * scale, scale = 1 + max |psi(x)|_E.
EquivarianceReport check_equivariance(const ParaboloidIsometry& iso, int samples = 20,
                                      std::uint64_t seed = 1);

/// Affine ambient map y -> M y + t.
struct FactorIsometry {
  Matrix M;
  Vec t;

  Vec operator()(const Vec& y) const;
};

/// y -> c + L (y - c) about the center of factor i (its base point for plane
/// factors). L must map W_i into itself pseudo-orthogonally; InvalidInput
/// otherwise, Unsupported for paraboloid factors.
FactorIsometry quadric_factor_isometry(const WarpedDecomposition& w, int i, const Matrix& l);

/// The paraboloid factor p_bar + x - x^2 a / 2, x in V_i, acted on by
/// (B, v) in the model (V_i, a_i, b) of its stage:
/// y -> T y + (I - T)(p_bar - b). Unsupported for other factors.
FactorIsometry paraboloid_factor_isometry(const WarpedDecomposition& w, int i, const Matrix& b,
                                          const Vec& v);

/// q -> psi(p_0, ..., f(p_i), ..., p_k) with p = psi^{-1}(q).
class LiftedIsometry {
 public:
  /// Throws InvalidInput when f moves sampled points of N_i off N_i or
  /// changes their mutual distances.
  LiftedIsometry(WarpedDecomposition w, int i, FactorIsometry f);

  Vec operator()(const Vec& q) const;
  WarpedPoint on_factors(const WarpedPoint& p) const;

  const WarpedDecomposition& decomposition() const noexcept { return w_; }
  int index() const noexcept { return i_; }

 private:
  WarpedDecomposition w_;
  int i_;
  FactorIsometry f_;
};

LiftedIsometry lift_factor_isometry(const WarpedDecomposition& w, int i, const FactorIsometry& f);

/// Central-difference Jacobian (step h) of a map at q; column j is d/dq_j.
Matrix numeric_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& q, double h = 1e-5);

/// max |(J^T g J - g)_ij| for the numeric Jacobian at q.
double pullback_gram_defect(const LiftedIsometry& f, const Vec& q, double h = 1e-5);

}  // namespace wpd
