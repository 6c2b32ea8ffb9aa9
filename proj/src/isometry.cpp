#include "warpdecomp/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "warpdecomp/errors.hpp"

namespace wpd {

namespace {

void set_column(Matrix& m, int j, const Vec& x) {
  for (int i = 0; i < x.size(); ++i) m(i, j) = x[i];
}

bool same_model(const ParaboloidModel& x, const ParaboloidModel& y) {
  if (!(x.space() == y.space()) || x.v.dim() != y.v.dim()) return false;
  if (max_abs(x.a - y.a) > kIsometryTol || max_abs(x.b - y.b) > kIsometryTol) return false;
  for (const Vec& e : y.v.basis())
    if (!x.v.contains(e)) return false;
  return true;
}

// Gram defect of a linear map on a pseudo-orthonormal basis of s.
double gram_defect(const Matrix& l, const Subspace& s) {
  const auto e = s.pseudo_orthonormal_basis();
  double worst = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Vec li = apply(l, e[i]);
    for (std::size_t j = i; j < e.size(); ++j)
      worst = std::max(worst, std::abs(inner(li, apply(l, e[j])) - inner(e[i], e[j])));
  }
  return worst;
}

}  // namespace

ParaboloidModel paraboloid_model(const Subspace& v, const Vec& a, const Vec& b) {
  const Space& s = v.space();
  if (!(a.space() == s) || !(b.space() == s)) throw DimensionMismatch("paraboloid model: a, b and V in different spaces");
  if (v.degenerate()) throw DegenerateSubspace("paraboloid model: V is degenerate");
  const double scale = 1.0 + euclidean_norm(a) * euclidean_norm(b);
  if (std::abs(sq(a)) > kIsometryTol * (1.0 + euclidean_dot(a, a)))
    throw InvalidInput("paraboloid model: a must be lightlike");
  if (std::abs(sq(b)) > kIsometryTol * (1.0 + euclidean_dot(b, b)))
    throw InvalidInput("paraboloid model: b must be lightlike");
  if (std::abs(inner(a, b) - 1.0) > kIsometryTol * scale)
    throw InvalidInput("paraboloid model: <a,b> must be 1");
  for (const Vec& e : v.basis()) {
    if (std::abs(inner(a, e)) > kIsometryTol * (1.0 + euclidean_norm(e)) ||
        std::abs(inner(b, e)) > kIsometryTol * (1.0 + euclidean_norm(e)))
      throw InvalidInput("paraboloid model: a and b must be orthogonal to V");
  }
  return ParaboloidModel{v, a, b, std::nullopt};
}

ParaboloidModel standard_paraboloid_model(const Space& base) {
  const int n = base.dim();
  const Space amb(n + 2, base.index() + 1);
  std::vector<Vec> basis;
  for (int j = 1; j <= n; ++j) basis.push_back(Vec::unit(amb, j));
  Vec a(amb), b(amb);
  a[0] = 1.0;
  a[n + 1] = 1.0;
  b[0] = -0.5;
  b[n + 1] = 0.5;
  ParaboloidModel m = paraboloid_model(Subspace::span(amb, std::move(basis)), a, b);
  m.base_space = base;
  return m;
}

Vec standard_lift(const ParaboloidModel& m, const Vec& x) {
  if (!m.base_space) throw Unsupported("standard_lift: not a standard model");
  if (!(x.space() == *m.base_space)) throw DimensionMismatch("standard_lift: wrong base space");
  Vec out(m.space());
  for (int j = 0; j < x.size(); ++j) out[j + 1] = x[j];
  return out;
}

Matrix standard_lift(const ParaboloidModel& m, const Matrix& b) {
  if (!m.base_space) throw Unsupported("standard_lift: not a standard model");
  const int n = m.base_space->dim();
  if (b.rows() != n || b.cols() != n) throw DimensionMismatch("standard_lift: matrix size");
  Matrix out(n + 2, n + 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i + 1, j + 1) = b(i, j);
  return out;
}

Vec paraboloid_embed(const ParaboloidModel& m, const Vec& x) {
  Vec out = m.b + x;
  out.axpy(-0.5 * sq(x), m.a);
  return out;
}

Matrix projector(const ParaboloidModel& m) {
  const Space& s = m.space();
  Matrix p(s.dim(), s.dim());
  for (int j = 0; j < s.dim(); ++j) set_column(p, j, m.v.project(Vec::unit(s, j)));
  return p;
}

Vec ParaboloidIsometry::act(const Vec& x) const { return apply(B, x) + v; }

ParaboloidIsometry paraboloid_isometry(const ParaboloidModel& m, const Matrix& b, const Vec& v) {
  const Space& s = m.space();
  if (b.rows() != s.dim() || b.cols() != s.dim()) throw DimensionMismatch("paraboloid isometry: B size");
  if (!(v.space() == s)) throw DimensionMismatch("paraboloid isometry: v in wrong space");
  const Matrix bp = b * projector(m);
  for (const Vec& e : m.v.basis())
    if (!m.v.contains(apply(bp, e))) throw InvalidInput("paraboloid isometry: B must map V into V");
  if (gram_defect(bp, m.v) > kIsometryTol) throw InvalidInput("paraboloid isometry: B is not pseudo-orthogonal on V");
  if (!m.v.contains(v)) throw InvalidInput("paraboloid isometry: v must lie in V");
  return ParaboloidIsometry{m, bp, m.v.project(v)};
}

ParaboloidIsometry identity_isometry(const ParaboloidModel& m) {
  return ParaboloidIsometry{m, projector(m), Vec(m.space())};
}

Matrix realize(const ParaboloidIsometry& iso) {
  const ParaboloidModel& m = iso.model;
  const Space& s = m.space();
  const double v2 = sq(iso.v);
  Matrix out(s.dim(), s.dim());
  for (int j = 0; j < s.dim(); ++j) {
    const Vec x = Vec::unit(s, j);
    const Vec p = m.v.project(x);
    const Vec bp = apply(iso.B, p);
    const double ax = inner(m.a, x);
    Vec tx = x - p + bp;
    tx.axpy(ax, iso.v);
    tx.axpy(-(inner(bp, iso.v) + 0.5 * ax * v2), m.a);
    set_column(out, j, tx);
  }
  return out;
}

ParaboloidIsometry compose_isometries(const ParaboloidIsometry& i1, const ParaboloidIsometry& i2) {
  if (!same_model(i1.model, i2.model)) throw InvalidInput("compose_isometries: different paraboloid models");
  return ParaboloidIsometry{i1.model, i1.B * i2.B, i1.v + apply(i1.B, i2.v)};
}

ParaboloidIsometry decode(const ParaboloidModel& m, const Matrix& t) {
  const Space& s = m.space();
  if (t.rows() != s.dim() || t.cols() != s.dim()) throw DimensionMismatch("decode: matrix size");
  if (pseudo_orthogonality_defect(s, t) > kIsometryTol * (1.0 + t.max_abs() * t.max_abs()))
    throw InvalidInput("decode: map is not pseudo-orthogonal");
  if (max_abs(apply(t, m.a) - m.a) > kIsometryTol * (1.0 + t.max_abs()))
    throw InvalidInput("decode: map does not fix a");
  const Matrix p = projector(m);
  return paraboloid_isometry(m, p * t * p, apply(p * t, m.b));
}

EquivarianceReport check_equivariance(const ParaboloidIsometry& iso, int samples, std::uint64_t seed) {
  const Matrix t = realize(iso);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, scale = 1.0;
  for (int k = 0; k < samples; ++k) {
    Vec x(iso.model.space());
    for (const Vec& e : iso.model.v.basis()) x.axpy(u(rng), e);
    const Vec px = paraboloid_embed(iso.model, x);
    scale = std::max(scale, 1.0 + euclidean_norm(px));
    worst = std::max(worst, euclidean_norm(paraboloid_embed(iso.model, iso.act(x)) - apply(t, px)));
  }
  return EquivarianceReport{worst, scale, samples, worst <= kIsometryTol * scale};
}

Vec FactorIsometry::operator()(const Vec& y) const { return apply(M, y) + t; }

FactorIsometry quadric_factor_isometry(const WarpedDecomposition& w, int i, const Matrix& l) {
  const Factor& f = w.factor(i);
  if (f.sphere.kind == SphereKind::kParaboloid)
    throw Unsupported("quadric_factor_isometry: paraboloid factor, use paraboloid_factor_isometry");
  const Space& s = w.space;
  if (l.rows() != s.dim() || l.cols() != s.dim()) throw DimensionMismatch("quadric_factor_isometry: matrix size");
  for (const Vec& e : f.w.basis())
    if (!f.w.contains(apply(l, e))) throw InvalidInput("quadric_factor_isometry: L must map W_i into W_i");
  if (gram_defect(l, f.w) > kIsometryTol) throw InvalidInput("quadric_factor_isometry: L is not pseudo-orthogonal on W_i");
  const Vec c = f.sphere.center ? *f.sphere.center : f.sphere.base;
  return FactorIsometry{l, c - apply(l, c)};
}

FactorIsometry paraboloid_factor_isometry(const WarpedDecomposition& w, int i, const Matrix& b,
                                          const Vec& v) {
  const Factor& f = w.factor(i);
  if (f.sphere.kind != SphereKind::kParaboloid)
    throw Unsupported("paraboloid_factor_isometry: factor is not a paraboloid");
  const Stage& st = w.stages.at(static_cast<std::size_t>(f.stage));
  if (!st.b) throw Unsupported("paraboloid_factor_isometry: stage has no b vector");
  const ParaboloidModel m = paraboloid_model(f.tangent, f.a, *st.b);
  const Matrix t = realize(paraboloid_isometry(m, b, v));
  const Vec shift = f.sphere.base - *st.b;
  return FactorIsometry{t, shift - apply(t, shift)};
}

LiftedIsometry::LiftedIsometry(WarpedDecomposition w, int i, FactorIsometry f)
    : w_(std::move(w)), i_(i), f_(std::move(f)) {
  if (i_ < 1 || i_ > w_.k()) throw InvalidInput("lift_factor_isometry: factor index out of range");
  const Space& s = w_.space;
  if (f_.M.rows() != s.dim() || f_.M.cols() != s.dim() || !(f_.t.space() == s))
    throw DimensionMismatch("lift_factor_isometry: map has the wrong size");
  const SphericalSubmanifold& n = w_.factor(i_).sphere;
  Sampler sampler(w_, 7);
  std::vector<Vec> ys;
  for (int k = 0; k < 8; ++k) ys.push_back(sampler.factor_point(i_));
  for (const Vec& y : ys) {
    const Vec fy = f_(y);
    if (!contains(n, fy, 1e-8)) throw InvalidInput("lift_factor_isometry: f moves points off N_i");
  }
  for (std::size_t a = 0; a < ys.size(); ++a)
    for (std::size_t b = a + 1; b < ys.size(); ++b) {
      const Vec d = ys[a] - ys[b];
      const double want = sq(d);
      if (std::abs(sq(f_(ys[a]) - f_(ys[b])) - want) > 1e-8 * (1.0 + euclidean_dot(d, d)))
        throw InvalidInput("lift_factor_isometry: f is not an isometry of N_i");
    }
}

WarpedPoint LiftedIsometry::on_factors(const WarpedPoint& p) const {
  WarpedPoint out = p;
  out.components.at(static_cast<std::size_t>(i_)) = f_(p.components.at(static_cast<std::size_t>(i_)));
  return out;
}

Vec LiftedIsometry::operator()(const Vec& q) const { return psi_forward(w_, on_factors(psi_inverse(w_, q))); }

LiftedIsometry lift_factor_isometry(const WarpedDecomposition& w, int i, const FactorIsometry& f) {
  return LiftedIsometry(w, i, f);
}

Matrix numeric_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& q, double h) {
  const Space& s = q.space();
  Matrix j(s.dim(), s.dim());
  for (int c = 0; c < s.dim(); ++c) {
    const Vec e = Vec::unit(s, c);
    set_column(j, c, (f(q + h * e) - f(q - h * e)) / (2 * h));
  }
  return j;
}

double pullback_gram_defect(const LiftedIsometry& f, const Vec& q, double h) {
  const Matrix j = numeric_jacobian([&](const Vec& x) { return f(x); }, q, h);
  return pseudo_orthogonality_defect(q.space(), j);
}

}  // namespace wpd
