#pragma once

// Warped-product decompositions of E^n_nu and of its central hyperquadrics.
//
// A decomposition is built from initial data (p_bar; V_0 (+) ... (+) V_k;
// a_1..a_k) and realizes
//
//   psi(p_0, ..., p_k) = p_0 + sum_i rho_i(p_0) (p_i - p_bar),
//   rho_i(p_0) = 1 + <a_i, p_0 - p_bar>,
//
// on N_0 x N_1 x ... x N_k, with N_0 = p_bar + V_0 cut down to rho_i > 0 and
// N_i the spherical submanifold determined by (p_bar, V_i, a_i).
//
// Multiply warped products with mixed causal data are obtained by compose,
// which nests a decomposition of the geodesic factor into another one. The
// result is stored as a list of stages, outermost first; the forward map and
// its pushforward use the master formula, inversion peels off the stages.

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "warpdecomp/pseudo_linear.hpp"
#include "warpdecomp/spheres.hpp"

namespace wpd {

struct InitialData {
  Vec base{Space(1, 0)};
  std::vector<Subspace> factors;  // V_0, V_1, ..., V_k
  std::vector<Vec> a;             // a_1, ..., a_k
  /// 0 for a decomposition of E^n_nu. Otherwise the data describes a
  /// decomposition of E^n_nu(kappa) through base: either tangent to the
  /// quadric (sum of dims n - 1, a_i = kappa base - z_i) or already lifted
  /// (sum of dims n, canonical).
  double kappa = 0.0;
  /// Null case only; chosen inside V_0 when absent.
  std::optional<Vec> b;
  /// The space being decomposed; the whole ambient space when absent.
  std::optional<Subspace> carrier;
  /// Cut disconnected factors down to the component through base.
  bool connected = false;
};

enum class CaseTag { kNonNull, kNull, kComposite };

const char* to_string(CaseTag t) noexcept;

struct Factor {
  Subspace tangent;                 // V_i
  Vec a;
  double kappa;                     // a_i^2
  SphericalSubmanifold sphere;      // N_i
  Subspace w;                       // W_i
  int stage;
};

/// One standard (non-null or null) decomposition of `carrier`.
struct Stage {
  CaseTag tag;
  Subspace carrier;
  Subspace geodesic;                // V_0 of this stage
  Subspace w0;                      // W_0
  std::vector<int> factors;         // 1-based indices into the factor list
  Vec center;                       // c
  std::optional<Vec> b;
};

struct QuadricRestriction {
  double kappa;
  /// N_0(kappa) sits inside the sphere determined by (p_bar, p_bar^perp cap V_0, kappa p_bar).
  SphericalSubmanifold geodesic_sphere;
  /// Enforce <kappa p_bar, p_0> > 0 on the geodesic component.
  bool cut;
  /// Minkowski with all a_i spacelike and kappa < 0: the same cut read off in
  /// the ambient space as <kappa c, q> > 0.
  std::optional<Vec> ambient_cut;
};

struct WarpedDecomposition {
  Space space;
  Vec base;
  Subspace geodesic;                // V_0 of the innermost stage
  std::vector<Factor> factors;      // N_1..N_k
  std::vector<Stage> stages;
  CaseTag tag;
  bool canonical;
  bool connected;
  std::optional<QuadricRestriction> restriction;

  /// Recipe used by translate.
  std::optional<InitialData> data;
  std::shared_ptr<const WarpedDecomposition> outer;
  std::shared_ptr<const WarpedDecomposition> inner;

  int k() const noexcept { return static_cast<int>(factors.size()); }
  const Factor& factor(int i) const { return factors.at(static_cast<std::size_t>(i - 1)); }
};

struct WarpedPoint {
  std::vector<Vec> components;  // p_0, p_1, ..., p_k
};

/// Throws InvalidInitialData (with the reason) or DimensionMismatch.
WarpedDecomposition build(const InitialData& d);

double rho(const WarpedDecomposition& w, const Vec& p0, int i);

/// Domain check: factor memberships and rho_i > 0.
bool in_domain(const WarpedDecomposition& w, const WarpedPoint& p, double tol = 1e-8);

/// Master formula. Throws OutOfDomain.
Vec psi_forward(const WarpedDecomposition& w, const WarpedPoint& p);

/// The case-expanded forms, evaluated stage by stage from the inside out.
/// Equal to psi_forward; kept separate as an independent evaluation.
Vec psi_expanded(const WarpedDecomposition& w, const WarpedPoint& p);

/// Name of the first violated image condition, or nullopt when q is in Im(psi).
/// The strict inequalities hold with a 1e-7 band: (P_i(q - c))^2 and
/// <a, q - c> must clear it (the former scaled by max(1, |q - c|)).
std::optional<std::string> image_violation(const WarpedDecomposition& w, const Vec& q);
bool image_contains(const WarpedDecomposition& w, const Vec& q);

/// Throws OutOfImage naming the violated condition. Points within 1e-7 of
/// the boundary of the image are refused.
WarpedPoint psi_inverse(const WarpedDecomposition& w, const Vec& q);

/// psi_* (v_0, ..., v_k). Throws OutOfDomain for non-tangent components.
Vec psi_pushforward(const WarpedDecomposition& w, const WarpedPoint& p,
                    const std::vector<Vec>& v);

/// Central difference (step h) of psi along curves through p with velocities
/// v: straight lines in planes and N_0, normalized rays on quadrics, the
/// chart x -> p_bar + x - x^2 a / 2 on paraboloids.
Vec psi_pushforward_numeric(const WarpedDecomposition& w, const WarpedPoint& p,
                            const std::vector<Vec>& v, double h = 1e-6);

/// v_0^2 + sum rho_i^2 v_i^2
double warped_norm(const WarpedDecomposition& w, const WarpedPoint& p,
                   const std::vector<Vec>& v);

/// Mean curvature vector of the leaf through psi(p) of the i-th foliation:
/// -(psi_* a_i)/rho_i, which is -a_i/rho_i where p_i = p_bar.
Vec leaf_mean_curvature(const WarpedDecomposition& w, const WarpedPoint& p, int i);

/// The decomposition with psi'(p - t) = psi(p) - t.
WarpedDecomposition translate(const WarpedDecomposition& w, const Vec& t);

/// Center of the canonical translation, p_bar minus the canonical base point.
Vec canonical_offset(const WarpedDecomposition& w);

/// Translate by canonical_offset; identity on canonical input.
WarpedDecomposition canonicalize(const WarpedDecomposition& w);

/// Decompose the geodesic factor of `outer` by `inner`. The inner carrier must
/// be the outer V_0, the base points must agree and the outer a (and b)
/// vectors must lie in the inner geodesic space, orthogonal to the inner a
/// (and b) vectors. Factors are ordered outer first.
WarpedDecomposition compose(const WarpedDecomposition& outer, const WarpedDecomposition& inner);

/// Restriction to E^n_nu(kappa), kappa = 1/p_bar^2. Requires canonical form.
WarpedDecomposition restrict_to_quadric(const WarpedDecomposition& w);

struct TypeTag {
  std::string family;      // e.g. "M x_tau H x S"
  std::string descriptor;  // with dimensions, e.g. "M^2 x_tau H^1 x_rho S^1"
};

TypeTag enumerate_type(const WarpedDecomposition& w);

struct ProductCheck {
  bool applicable;
  bool holds;
  int samples;
  double min_gradient;
};

/// On a quadric no warping function may be constant: the tangential gradient
/// of every rho_i must be nonzero at sampled points of N_0(kappa). Vacuous
/// for flat ambient space.
ProductCheck check_no_product_decomposition(const WarpedDecomposition& w, int samples = 200,
                                            std::uint64_t seed = 1);

/// Seeded sampling of domain points and tangent vectors.
class Sampler {
 public:
  Sampler(const WarpedDecomposition& w, std::uint64_t seed, double margin = 0.2);

  Vec geodesic_point();
  Vec factor_point(int i);
  WarpedPoint point();
  std::vector<Vec> tangent(const WarpedPoint& p);
  double uniform(double lo, double hi);

 private:
  const WarpedDecomposition& w_;
  std::mt19937_64 engine_;
  double margin_;
};

}  // namespace wpd
