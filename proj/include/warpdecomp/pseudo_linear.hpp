#pragma once

// Linear algebra of pseudo-Euclidean space E^n_nu: the indefinite inner
// product, causal classes, subspaces with their signatures, orthogonal
// projections and complements, dual lightlike bases and sampled
// pseudo-orthogonal maps.
//
// Metric convention: the first `index` standard coordinates are the negative
// directions, i.e. g = diag(-1, ..., -1, +1, ..., +1).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpdecomp/matrix.hpp"

namespace wpd {

/// Relative tolerance used to decide lightlike / degenerate / zero.
inline constexpr double kClassTol = 1e-9;

class Space {
 public:
  Space(int dim, int index);

  int dim() const noexcept { return dim_; }
  int index() const noexcept { return index_; }
  /// Metric coefficient g_ii of standard coordinate i.
  double sign(int i) const noexcept { return i < index_ ? -1.0 : 1.0; }
  Matrix metric() const;

  std::string name() const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  int dim_;
  int index_;
};

/// A vector (or point) of a pseudo-Euclidean space, in standard coordinates.
class Vec {
 public:
  explicit Vec(Space space);
  Vec(Space space, std::vector<double> coords);
  Vec(Space space, std::initializer_list<double> coords);

  static Vec unit(Space space, int i);

  const Space& space() const noexcept { return space_; }
  int size() const noexcept { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const noexcept { return coords_; }

  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return coords_[static_cast<std::size_t>(i)]; }

  Vec& operator+=(const Vec& rhs);
  Vec& operator-=(const Vec& rhs);
  Vec& operator*=(double s);
  Vec& operator/=(double s);
  /// this += s * x
  Vec& axpy(double s, const Vec& x);

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  Space space_;
  std::vector<double> coords_;
};

Vec operator+(Vec lhs, const Vec& rhs);
Vec operator-(Vec lhs, const Vec& rhs);
Vec operator-(Vec v);
Vec operator*(double s, Vec v);
Vec operator*(Vec v, double s);
Vec operator/(Vec v, double s);

/// Applies a dim x dim matrix to v (standard coordinates).
Vec apply(const Matrix& m, const Vec& v);

/// <x, y> = -sum_{i<nu} x_i y_i + sum_{i>=nu} x_i y_i.
double inner(const Vec& x, const Vec& y);
/// x^2 := <x, x>.
inline double sq(const Vec& x) { return inner(x, x); }
/// ||x|| := sqrt|<x, x>|.
double pseudo_norm(const Vec& x);
double euclidean_norm(const Vec& x);
double euclidean_dot(const Vec& x, const Vec& y);
double max_abs(const Vec& x);

enum class CausalClass { kZero, kSpacelike, kTimelike, kLightlike };

const char* to_string(CausalClass c) noexcept;

/// zero iff ||v||_inf <= kClassTol; else lightlike iff
/// |<v,v>| <= kClassTol * sum v_i^2; else the sign of <v,v>.
CausalClass classify(const Vec& v);

/// Linear subspace given by an independent basis, with its Gram data.
class Subspace {
 public:
  /// Throws RankDeficient when the basis vectors are dependent.
  static Subspace span(const Space& space, std::vector<Vec> basis);
  static Subspace whole(const Space& space);
  static Subspace zero(const Space& space);

  const Space& space() const noexcept { return space_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  /// Number of negative eigenvalues of the Gram array.
  int index() const noexcept { return index_; }
  bool degenerate() const noexcept { return degenerate_; }
  const std::vector<Vec>& basis() const noexcept { return basis_; }
  const Matrix& gram() const noexcept { return gram_; }

  /// Orthogonal projection. Throws DegenerateSubspace.
  Vec project(const Vec& v) const;

  /// Euclidean distance of v from the span, relative test
  /// ||v - Q Q^T v|| <= tol * (1 + ||v||).
  bool contains(const Vec& v, double tol = 1e-9) const;
  double residual(const Vec& v) const;

  /// Basis e_j with <e_i, e_j> = +-delta_ij, negative directions first.
  /// Throws DegenerateSubspace.
  std::vector<Vec> pseudo_orthonormal_basis() const;
  /// Euclidean-orthonormal basis of the same span.
  const std::vector<Vec>& euclidean_basis() const noexcept { return qbasis_; }

 private:
  Subspace(Space space, std::vector<Vec> basis);

  Space space_;
  std::vector<Vec> basis_;
  std::vector<Vec> qbasis_;
  Matrix gram_;
  std::optional<Matrix> gram_inv_;
  int index_ = 0;
  bool degenerate_ = false;
};

struct Signature {
  int dim;
  int index;
  bool degenerate;
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature subspace_signature(const Subspace& s);

inline Vec project(const Subspace& s, const Vec& v) { return s.project(v); }

/// S^perp inside `carrier` (the whole space when omitted). Requires S
/// non-degenerate and contained in the carrier. The returned basis is
/// Euclidean-orthonormal.
Subspace orthogonal_complement(const Subspace& s,
                               const std::optional<Subspace>& carrier = {});

/// Span of the union of the two bases.
Subspace direct_sum(const Subspace& x, const Subspace& y);

/// Given independent, pairwise orthogonal lightlike a_1..a_k (k <= nu),
/// returns b_1..b_k with <a_i, b_j> = delta_ij and <b_i, b_j> = 0. Every b_j
/// lies in `carrier` (the whole space when omitted), which must be
/// non-degenerate and contain the a_i.
std::vector<Vec> dual_lightlike_basis(std::span<const Vec> a,
                                      const std::optional<Subspace>& carrier = {});

/// exp(A) for a generator A with A^T g + g A = 0.
Matrix pseudo_orthogonal_from_generator(const Space& space, const Matrix& generator);

/// True when A^T g + g A vanishes to `tol` (max entry).
bool is_pseudo_skew(const Space& space, const Matrix& generator, double tol = 1e-12);

/// max_ij |(B^T g B - g)_ij|
double pseudo_orthogonality_defect(const Space& space, const Matrix& b);

/// Seeded pseudo-orthogonal map exp(g K), K skew with entries drawn
/// uniformly from [-scale, scale].
Matrix pseudo_orthogonal_sample(const Space& space, std::uint64_t seed,
                                double scale = 0.5);

}  // namespace wpd
