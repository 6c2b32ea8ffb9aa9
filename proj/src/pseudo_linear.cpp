#include "warpdecomp/pseudo_linear.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "warpdecomp/errors.hpp"

namespace wpd {

// ---------------------------------------------------------------- Space

Space::Space(int dim, int index) : dim_(dim), index_(index) {
  if (dim < 1) throw InvalidInput("Space: dimension must be >= 1");
  if (index < 0 || index > dim)
    throw InvalidInput("Space: index must satisfy 0 <= index <= dim");
}

Matrix Space::metric() const {
  Matrix g(dim_, dim_);
  for (int i = 0; i < dim_; ++i) g(i, i) = sign(i);
  return g;
}

std::string Space::name() const {
  std::ostringstream os;
  os << "E^" << dim_ << "_" << index_;
  return os.str();
}

// ---------------------------------------------------------------- Vec

Vec::Vec(Space space)
    : space_(space), coords_(static_cast<std::size_t>(space.dim()), 0.0) {}

Vec::Vec(Space space, std::vector<double> coords)
    : space_(space), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != space_.dim()) {
    throw DimensionMismatch("Vec: " + std::to_string(coords_.size()) +
                            " coordinates for " + space_.name());
  }
}

Vec::Vec(Space space, std::initializer_list<double> coords)
    : Vec(space, std::vector<double>(coords)) {}

Vec Vec::unit(Space space, int i) {
  Vec v(space);
  v[i] = 1.0;
  return v;
}

namespace {
void require_same_space(const Vec& x, const Vec& y, const char* what) {
  if (!(x.space() == y.space())) {
    throw DimensionMismatch(std::string(what) + ": vectors of " +
                            x.space().name() + " and " + y.space().name());
  }
}
}  // namespace

Vec& Vec::operator+=(const Vec& rhs) {
  require_same_space(*this, rhs, "Vec +=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& rhs) {
  require_same_space(*this, rhs, "Vec -=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& x : coords_) x *= s;
  return *this;
}

Vec& Vec::operator/=(double s) {
  for (double& x : coords_) x /= s;
  return *this;
}

Vec& Vec::axpy(double s, const Vec& x) {
  require_same_space(*this, x, "Vec axpy");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += s * x.coords_[i];
  return *this;
}

Vec operator+(Vec lhs, const Vec& rhs) { return lhs += rhs; }
Vec operator-(Vec lhs, const Vec& rhs) { return lhs -= rhs; }
Vec operator-(Vec v) { return v *= -1.0; }
Vec operator*(double s, Vec v) { return v *= s; }
Vec operator*(Vec v, double s) { return v *= s; }
Vec operator/(Vec v, double s) { return v /= s; }

Vec apply(const Matrix& m, const Vec& v) {
  if (m.rows() != v.size() || m.cols() != v.size())
    throw DimensionMismatch("apply: matrix does not act on " + v.space().name());
  return Vec(v.space(), m * v.coords());
}

double inner(const Vec& x, const Vec& y) {
  require_same_space(x, y, "inner");
  const int nu = x.space().index();
  double neg = 0.0;
  double pos = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (i < nu)
      neg += x[i] * y[i];
    else
      pos += x[i] * y[i];
  }
  return pos - neg;
}

double pseudo_norm(const Vec& x) { return std::sqrt(std::abs(sq(x))); }

double euclidean_dot(const Vec& x, const Vec& y) {
  require_same_space(x, y, "euclidean_dot");
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double euclidean_norm(const Vec& x) { return std::sqrt(euclidean_dot(x, x)); }

double max_abs(const Vec& x) {
  double m = 0.0;
  for (double c : x.coords()) m = std::max(m, std::abs(c));
  return m;
}

const char* to_string(CausalClass c) noexcept {
  switch (c) {
    case CausalClass::kZero: return "zero";
    case CausalClass::kSpacelike: return "spacelike";
    case CausalClass::kTimelike: return "timelike";
    case CausalClass::kLightlike: return "lightlike";
  }
  return "unknown";
}

CausalClass classify(const Vec& v) {
  if (max_abs(v) <= kClassTol) return CausalClass::kZero;
  const double q = sq(v);
  if (std::abs(q) <= kClassTol * euclidean_dot(v, v)) return CausalClass::kLightlike;
  return q > 0 ? CausalClass::kSpacelike : CausalClass::kTimelike;
}

// ---------------------------------------------------------------- Subspace

namespace {

/// Column-pivoted modified Gram-Schmidt (Euclidean). Picks at most
/// `max_count` vectors, stopping once the largest remaining residual drops
/// below rel_tol times the largest input norm.
std::vector<Vec> pivoted_orthonormalize(std::vector<Vec> work, double rel_tol,
                                        std::size_t max_count) {
  double scale = 0.0;
  for (const Vec& w : work) scale = std::max(scale, euclidean_norm(w));
  std::vector<Vec> q;
  if (scale == 0.0) return q;
  while (q.size() < max_count && !work.empty()) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
      const double nrm = euclidean_norm(work[i]);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = i;
      }
    }
    if (best_norm <= rel_tol * scale) break;
    Vec e = work[best] / best_norm;
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(best));
    for (Vec& w : work) w.axpy(-euclidean_dot(e, w), e);
    // second pass keeps orthogonality at the 1e-16 level
    for (const Vec& prev : q) e.axpy(-euclidean_dot(prev, e), prev);
    e /= euclidean_norm(e);
    q.push_back(std::move(e));
  }
  return q;
}

}  // namespace

Subspace::Subspace(Space space, std::vector<Vec> basis)
    : space_(space), basis_(std::move(basis)) {
  const int m = static_cast<int>(basis_.size());
  for (const Vec& b : basis_) {
    if (!(b.space() == space_))
      throw DimensionMismatch("Subspace: basis vector of " + b.space().name() +
                              " in " + space_.name());
  }
  if (m > space_.dim()) throw RankDeficient("Subspace: more vectors than dimensions");

  qbasis_ = pivoted_orthonormalize(basis_, 1e-10, basis_.size());
  if (static_cast<int>(qbasis_.size()) != m)
    throw RankDeficient("Subspace: basis vectors are linearly dependent");

  gram_ = Matrix(m, m);
  Matrix euclid(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      gram_(i, j) = inner(basis_[static_cast<std::size_t>(i)],
                          basis_[static_cast<std::size_t>(j)]);
      euclid(i, j) = euclidean_dot(basis_[static_cast<std::size_t>(i)],
                                   basis_[static_cast<std::size_t>(j)]);
    }
  if (m == 0) return;

  // |det G| / det E is invariant under change of basis.
  degenerate_ = std::abs(determinant(gram_)) <= kClassTol * determinant(euclid);

  const SymmetricEigen eig = jacobi_eigen(gram_);
  double top = 0.0;
  for (double l : eig.values) top = std::max(top, std::abs(l));
  for (double l : eig.values)
    if (l < -kClassTol * top) ++index_;

  if (!degenerate_) gram_inv_ = inverse(gram_, 0.0);
}

Subspace Subspace::span(const Space& space, std::vector<Vec> basis) {
  return Subspace(space, std::move(basis));
}

Subspace Subspace::whole(const Space& space) {
  std::vector<Vec> e;
  for (int i = 0; i < space.dim(); ++i) e.push_back(Vec::unit(space, i));
  return Subspace(space, std::move(e));
}

Subspace Subspace::zero(const Space& space) { return Subspace(space, {}); }

Vec Subspace::project(const Vec& v) const {
  if (degenerate_)
    throw DegenerateSubspace("project: orthogonal projection onto a degenerate subspace");
  const int m = dim();
  Vec out(space_);
  if (m == 0) {
    if (!(v.space() == space_)) throw DimensionMismatch("project: space mismatch");
    return out;
  }
  std::vector<double> rhs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) rhs[static_cast<std::size_t>(i)] = inner(basis_[static_cast<std::size_t>(i)], v);
  const std::vector<double> c = (*gram_inv_) * std::span<const double>(rhs);
  for (int i = 0; i < m; ++i) out.axpy(c[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(i)]);
  return out;
}

double Subspace::residual(const Vec& v) const {
  Vec r = v;
  for (const Vec& q : qbasis_) r.axpy(-euclidean_dot(q, r), q);
  return euclidean_norm(r);
}

bool Subspace::contains(const Vec& v, double tol) const {
  return residual(v) <= tol * (1.0 + euclidean_norm(v));
}

std::vector<Vec> Subspace::pseudo_orthonormal_basis() const {
  if (degenerate_)
    throw DegenerateSubspace("pseudo_orthonormal_basis: degenerate subspace");
  const int m = dim();
  std::vector<Vec> out;
  if (m == 0) return out;
  const SymmetricEigen eig = jacobi_eigen(gram_);
  for (int j = 0; j < m; ++j) {
    Vec e(space_);
    for (int i = 0; i < m; ++i) e.axpy(eig.vectors(i, j), basis_[static_cast<std::size_t>(i)]);
    e /= std::sqrt(std::abs(eig.values[static_cast<std::size_t>(j)]));
    out.push_back(std::move(e));
  }
  return out;
}

Signature subspace_signature(const Subspace& s) {
  return Signature{s.dim(), s.index(), s.degenerate()};
}

Subspace orthogonal_complement(const Subspace& s,
                               const std::optional<Subspace>& carrier) {
  if (s.degenerate())
    throw DegenerateSubspace("orthogonal_complement: subspace is degenerate");
  const Subspace host = carrier ? *carrier : Subspace::whole(s.space());
  if (!(host.space() == s.space()))
    throw DimensionMismatch("orthogonal_complement: carrier in another space");
  for (const Vec& b : s.basis()) {
    if (!host.contains(b, 1e-9))
      throw InvalidInput("orthogonal_complement: subspace not contained in carrier");
  }
  const int target = host.dim() - s.dim();
  std::vector<Vec> candidates;
  for (const Vec& c : host.euclidean_basis()) candidates.push_back(c - s.project(c));
  std::vector<Vec> q = pivoted_orthonormalize(std::move(candidates), 1e-10,
                                              static_cast<std::size_t>(std::max(target, 0)));
  if (static_cast<int>(q.size()) != target)
    throw RankDeficient("orthogonal_complement: complement has unexpected dimension");
  return Subspace::span(s.space(), std::move(q));
}

Subspace direct_sum(const Subspace& x, const Subspace& y) {
  std::vector<Vec> b = x.basis();
  b.insert(b.end(), y.basis().begin(), y.basis().end());
  return Subspace::span(x.space(), std::move(b));
}

// ---------------------------------------------------------------- duals

std::vector<Vec> dual_lightlike_basis(std::span<const Vec> a,
                                      const std::optional<Subspace>& carrier) {
  const std::size_t k = a.size();
  if (k == 0) return {};
  const Space space = a[0].space();
  Subspace host = carrier ? *carrier : Subspace::whole(space);
  if (host.degenerate())
    throw DegenerateSubspace("dual_lightlike_basis: carrier is degenerate");

  for (std::size_t i = 0; i < k; ++i) {
    if (!(a[i].space() == space))
      throw DimensionMismatch("dual_lightlike_basis: vectors from different spaces");
    if (classify(a[i]) != CausalClass::kLightlike)
      throw InvalidInput("dual_lightlike_basis: a_" + std::to_string(i + 1) +
                         " is not lightlike");
    if (!host.contains(a[i]))
      throw InvalidInput("dual_lightlike_basis: a_" + std::to_string(i + 1) +
                         " is not in the carrier");
    for (std::size_t j = 0; j < i; ++j) {
      const double scale = euclidean_norm(a[i]) * euclidean_norm(a[j]);
      if (std::abs(inner(a[i], a[j])) > kClassTol * scale)
        throw InvalidInput("dual_lightlike_basis: a_" + std::to_string(j + 1) +
                           " and a_" + std::to_string(i + 1) + " are not orthogonal");
    }
  }
  if (static_cast<int>(k) > host.index())
    throw InvalidInput("dual_lightlike_basis: more lightlike vectors than the index allows");
  // Throws RankDeficient on dependent input.
  (void)Subspace::span(space, std::vector<Vec>(a.begin(), a.end()));

  std::vector<Vec> b;
  for (std::size_t j = 0; j < k; ++j) {
    // Least-norm b in the current carrier with <a_j, b> = 1 and <a_i, b> = 0
    // for the remaining i > j.
    const std::vector<Vec>& q = host.euclidean_basis();
    const int rows = static_cast<int>(k - j);
    const int cols = static_cast<int>(q.size());
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        m(r, c) = inner(a[j + static_cast<std::size_t>(r)], q[static_cast<std::size_t>(c)]);
    std::vector<double> rhs(static_cast<std::size_t>(rows), 0.0);
    rhs[0] = 1.0;
    const Matrix mt = m.transpose();
    const std::vector<double> y = solve(m * mt, rhs);
    const std::vector<double> x = mt * std::span<const double>(y);
    Vec bj(space);
    for (int c = 0; c < cols; ++c) bj.axpy(x[static_cast<std::size_t>(c)], q[static_cast<std::size_t>(c)]);
    bj.axpy(-0.5 * sq(bj), a[j]);
    if (j + 1 < k) {
      host = orthogonal_complement(Subspace::span(space, {a[j], bj}), host);
    }
    b.push_back(std::move(bj));
  }
  return b;
}

// ---------------------------------------------------------------- O(g)

bool is_pseudo_skew(const Space& space, const Matrix& generator, double tol) {
  const Matrix g = space.metric();
  const Matrix d = generator.transpose() * g + g * generator;
  return d.max_abs() <= tol * std::max(1.0, generator.max_abs());
}

Matrix pseudo_orthogonal_from_generator(const Space& space, const Matrix& generator) {
  if (generator.rows() != space.dim() || generator.cols() != space.dim())
    throw DimensionMismatch("pseudo_orthogonal_from_generator: shape mismatch");
  if (!is_pseudo_skew(space, generator))
    throw InvalidInput("pseudo_orthogonal_from_generator: A^T g + g A != 0");
  return expm(generator);
}

double pseudo_orthogonality_defect(const Space& space, const Matrix& b) {
  const Matrix g = space.metric();
  return (b.transpose() * g * b - g).max_abs();
}

Matrix pseudo_orthogonal_sample(const Space& space, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  const int n = space.dim();
  Matrix k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double x = u(rng);
      k(i, j) = x;
      k(j, i) = -x;
    }
  // A = g K satisfies A^T g + g A = K^T + K = 0.
  return expm(space.metric() * k);
}

}  // namespace wpd
