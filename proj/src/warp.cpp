#include "warpdecomp/warp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "warpdecomp/errors.hpp"

namespace wpd {

const char* to_string(CaseTag t) noexcept {
  switch (t) {
    case CaseTag::kNonNull: return "non-null";
    case CaseTag::kNull: return "null";
    case CaseTag::kComposite: return "composite";
  }
  return "unknown";
}

namespace {

constexpr double kDataTol = 1e-9;
constexpr double kBoundary = 1e-7;

bool orthogonal(const Vec& x, const Vec& y, double tol = kDataTol) {
  return std::abs(inner(x, y)) <= tol * (1.0 + euclidean_norm(x) * euclidean_norm(y));
}

bool is_null(const Vec& v) { return classify(v) == CausalClass::kLightlike; }

std::string join(const std::vector<int>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

bool compute_canonical(const WarpedDecomposition& w) {
  if (!w.geodesic.contains(w.base, kDataTol)) return false;
  for (const Factor& f : w.factors) {
    if (std::abs(inner(f.a, w.base) - 1.0) >
        kDataTol * (1.0 + euclidean_norm(f.a) * euclidean_norm(w.base)))
      return false;
  }
  return true;
}

[[noreturn]] void bad(const std::string& what) { throw InvalidInitialData(what); }

WarpedDecomposition build_flat(const InitialData& d) {
  const Space& s = d.base.space();
  const int k = static_cast<int>(d.factors.size()) - 1;
  const Subspace carrier = d.carrier ? *d.carrier : Subspace::whole(s);
  if (!(carrier.space() == s)) throw DimensionMismatch("build: carrier in another space");

  int total = 0;
  for (int i = 0; i <= k; ++i) {
    const Subspace& v = d.factors[static_cast<std::size_t>(i)];
    if (!(v.space() == s)) throw DimensionMismatch("build: factor in another space");
    if (v.dim() < 1) bad("factor V_" + std::to_string(i) + " is trivial");
    total += v.dim();
    for (const Vec& x : v.basis())
      if (!carrier.contains(x, kDataTol))
        bad("factor V_" + std::to_string(i) + " is not contained in the carrier");
  }
  if (total != carrier.dim())
    bad("dimensions of V_0..V_k sum to " + std::to_string(total) + ", expected " +
        std::to_string(carrier.dim()));
  for (int i = 0; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      for (const Vec& x : d.factors[static_cast<std::size_t>(i)].basis())
        for (const Vec& y : d.factors[static_cast<std::size_t>(j)].basis())
          if (!orthogonal(x, y))
            bad("factors V_" + std::to_string(i) + " and V_" + std::to_string(j) +
                " are not orthogonal");
  for (int i = 0; i <= k; ++i)
    if (d.factors[static_cast<std::size_t>(i)].degenerate())
      bad("factor V_" + std::to_string(i) + " is degenerate");

  const Subspace& v0 = d.factors[0];
  std::vector<int> null_idx, nonnull_idx;
  for (int i = 1; i <= k; ++i) {
    const Vec& a = d.a[static_cast<std::size_t>(i - 1)];
    if (!(a.space() == s)) throw DimensionMismatch("build: a-vector in another space");
    if (classify(a) == CausalClass::kZero)
      bad("a_" + std::to_string(i) + " is zero; the decomposition must be proper");
    if (!v0.contains(a, kDataTol)) bad("a_" + std::to_string(i) + " is not in V_0");
    (is_null(a) ? null_idx : nonnull_idx).push_back(i);
  }
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      if (!orthogonal(d.a[static_cast<std::size_t>(i - 1)], d.a[static_cast<std::size_t>(j - 1)]))
        bad("a_" + std::to_string(i) + " and a_" + std::to_string(j) + " are not orthogonal");
  try {
    (void)Subspace::span(s, d.a);
  } catch (const RankDeficient&) {
    bad("a-vectors are linearly dependent");
  }
  if (!null_idx.empty() && k != 1) {
    if (nonnull_idx.empty())
      bad("more than one lightlike a-vector (indices " + join(null_idx) + ")");
    bad("mixed lightlike and non-lightlike a-vectors (lightlike " + join(null_idx) +
        ", non-lightlike " + join(nonnull_idx) + "); build mixed cases with compose");
  }
  const bool null_case = !null_idx.empty();
  if (d.b && !null_case) bad("b_vector given for a non-null decomposition");

  WarpedDecomposition w{s, d.base, v0, {}, {}, null_case ? CaseTag::kNull : CaseTag::kNonNull,
                        false, d.connected, std::nullopt, d, nullptr, nullptr};
  Stage st{w.tag, carrier, v0, Subspace::zero(s), {}, d.base, std::nullopt};

  for (int i = 1; i <= k; ++i) {
    const Vec& a = d.a[static_cast<std::size_t>(i - 1)];
    SphericalSubmanifold n =
        classify_sphere({d.base, d.factors[static_cast<std::size_t>(i)], a}, d.connected);
    Subspace wi = null_case ? d.factors[static_cast<std::size_t>(i)] : n.carrier;
    w.factors.push_back(Factor{d.factors[static_cast<std::size_t>(i)], a, sq(a), std::move(n),
                               std::move(wi), 0});
    st.factors.push_back(i);
  }

  if (null_case) {
    const Vec& a = d.a[0];
    Vec b(s);
    if (d.b) {
      b = *d.b;
      if (!(b.space() == s)) throw DimensionMismatch("build: b-vector in another space");
      if (!v0.contains(b, kDataTol)) bad("b is not in V_0");
      if (std::abs(sq(b)) > kDataTol * (1.0 + euclidean_dot(b, b))) bad("b is not lightlike");
      if (std::abs(inner(a, b) - 1.0) > kDataTol * (1.0 + euclidean_norm(a) * euclidean_norm(b)))
        bad("<a, b> != 1");
    } else {
      try {
        const std::vector<Vec> single{a};
        b = dual_lightlike_basis(single, v0).front();
      } catch (const Error& e) {
        bad(std::string("no lightlike b in V_0 dual to a: ") + e.what());
      }
    }
    st.center = d.base - b;
    st.w0 = orthogonal_complement(Subspace::span(s, {a, b}), v0);
    st.b = b;
  } else {
    for (const Factor& f : w.factors) st.center -= f.a / f.kappa;
    st.w0 = orthogonal_complement(Subspace::span(s, d.a), v0);
  }
  w.stages.push_back(std::move(st));
  w.canonical = compute_canonical(w);
  return w;
}

// Inverse of one stage: geodesic component and the stage's factor points.
struct StageInverse {
  Vec x0;
  std::vector<Vec> points;
};

std::optional<std::string> stage_violation(const WarpedDecomposition& w, const Stage& st,
                                           const Vec& x) {
  const Vec r = x - st.center;
  if (st.tag == CaseTag::kNull) {
    if (!(inner(w.factor(st.factors.front()).a, r) >= kBoundary))
      return std::string("null_half_space");
    return std::nullopt;
  }
  const double band = kBoundary * std::max(1.0, euclidean_norm(r));
  for (int i : st.factors) {
    const Factor& f = w.factor(i);
    const Vec pr = f.w.project(r);
    const double eps = f.kappa > 0 ? 1.0 : -1.0;
    if (!(eps * sq(pr) >= band * band)) return "sgn:" + std::to_string(i);
    if (f.sphere.component_restricted && !(inner(f.a, pr) > 0.0))
      return "component:" + std::to_string(i);
  }
  return std::nullopt;
}

StageInverse stage_inverse(const WarpedDecomposition& w, const Stage& st, const Vec& x,
                           bool refuse_boundary = true) {
  const Vec r = x - st.center;
  StageInverse out{st.center + st.w0.project(r), {}};
  if (st.tag == CaseTag::kNull) {
    const Factor& f = w.factor(st.factors.front());
    const Vec& a = f.a;
    const Vec& b = *st.b;
    const double rho = inner(a, r);
    if (refuse_boundary && rho < kBoundary)
      throw OutOfImage("near_boundary", "psi_inverse: <a, q - c> is within 1e-7 of zero");
    const Vec p1 = f.w.project(r);
    const double p1sq = sq(p1);
    out.x0.axpy(inner(b, r) + p1sq / (2.0 * rho), a);
    out.x0.axpy(rho, b);
    Vec q1 = w.base + p1 / rho;
    q1.axpy(-p1sq / (2.0 * rho * rho), a);
    out.points.push_back(std::move(q1));
    return out;
  }
  const double scale = std::max(1.0, euclidean_norm(r));
  for (int i : st.factors) {
    const Factor& f = w.factor(i);
    const Vec pr = f.w.project(r);
    const double norm = pseudo_norm(pr);
    if (refuse_boundary && norm < kBoundary * scale)
      throw OutOfImage("near_boundary", "psi_inverse: ||P_" + std::to_string(i) +
                                            "(q - c)|| is within 1e-7 of zero");
    const double root = std::sqrt(std::abs(f.kappa));
    const double eps = f.kappa > 0 ? 1.0 : -1.0;
    out.x0.axpy(eps * norm / root, f.a);
    out.points.push_back(*f.sphere.center + pr / (root * norm));
  }
  return out;
}

Vec stage_forward(const WarpedDecomposition& w, const Stage& st, const Vec& x0,
                  const std::vector<Vec>& comps) {
  const Vec r = x0 - st.center;
  Vec out = st.center + st.w0.project(r);
  if (st.tag == CaseTag::kNull) {
    const Factor& f = w.factor(st.factors.front());
    const Vec& a = f.a;
    const Vec& b = *st.b;
    const Vec p1 = f.w.project(comps[static_cast<std::size_t>(st.factors.front())] - w.base);
    const double ra = inner(a, r);
    out.axpy(inner(b, r) - 0.5 * ra * sq(p1), a);
    out.axpy(ra, b);
    out.axpy(ra, p1);
    return out;
  }
  for (int i : st.factors) {
    const Factor& f = w.factor(i);
    out.axpy(inner(f.a, r), comps[static_cast<std::size_t>(i)] - *f.sphere.center);
  }
  return out;
}

std::optional<std::string> domain_violation(const WarpedDecomposition& w, const WarpedPoint& p,
                                            double tol) {
  if (static_cast<int>(p.components.size()) != w.k() + 1)
    return "expected " + std::to_string(w.k() + 1) + " components";
  for (const Vec& c : p.components)
    if (!(c.space() == w.space)) return std::string("component in another space");
  const Vec& p0 = p.components[0];
  if (!w.geodesic.contains(p0 - w.base, tol)) return std::string("p_0 is not on p_bar + V_0");
  for (int i = 1; i <= w.k(); ++i)
    if (!(rho(w, p0, i) > 0.0)) return "rho_" + std::to_string(i) + "(p_0) <= 0";
  if (w.restriction && !contains(w.restriction->geodesic_sphere, p0, tol))
    return std::string("p_0 is not on N_0(kappa)");
  for (int i = 1; i <= w.k(); ++i)
    if (!contains(w.factor(i).sphere, p.components[static_cast<std::size_t>(i)], tol))
      return "p_" + std::to_string(i) + " is not on N_" + std::to_string(i);
  return std::nullopt;
}

std::string describe_predicate(const std::string& key) {
  if (key.rfind("sgn:", 0) == 0)
    return "sgn condition violated: sgn (P_" + key.substr(4) + "(q - c))^2 != eps_" + key.substr(4);
  if (key.rfind("component:", 0) == 0)
    return "connected component condition violated: <a_" + key.substr(10) + ", P_" +
           key.substr(10) + "(q - c)> <= 0";
  if (key == "null_half_space") return "null condition violated: <a, q - c> <= 0";
  if (key == "quadric") return "quadric condition violated: q^2 != 1/kappa";
  if (key == "quadric_component")
    return "connected component condition violated: <kappa p_bar, q_0> <= 0";
  if (key == "carrier") return "carrier condition violated: q - p_bar not in the carrier";
  return key;
}

std::vector<Vec> all_a_and_b(const WarpedDecomposition& w) {
  std::vector<Vec> out;
  for (const Factor& f : w.factors) out.push_back(f.a);
  for (const Stage& s : w.stages)
    if (s.b) out.push_back(*s.b);
  return out;
}

}  // namespace

WarpedDecomposition build(const InitialData& d) {
  const Space& s = d.base.space();
  if (d.factors.size() < 2) bad("at least one spherical factor is required (k >= 1)");
  if (d.a.size() != d.factors.size() - 1)
    bad("expected " + std::to_string(d.factors.size() - 1) + " a-vectors, got " +
        std::to_string(d.a.size()));
  if (d.kappa == 0.0) return build_flat(d);

  if (!std::isfinite(d.kappa)) bad("kappa is not finite");
  if (d.carrier) bad("quadric data must decompose the whole space");
  if (std::abs(d.kappa * sq(d.base) - 1.0) > 1e-9)
    bad("base point is not on E^n_nu(kappa): kappa * p_bar^2 != 1");
  int total = 0;
  for (const Subspace& v : d.factors) total += v.dim();
  InitialData lifted = d;
  lifted.kappa = 0.0;
  if (total == s.dim() - 1) {
    for (std::size_t i = 0; i < d.factors.size(); ++i)
      for (const Vec& x : d.factors[i].basis())
        if (!orthogonal(x, d.base))
          bad("factor V_" + std::to_string(i) + " is not tangent to the quadric at p_bar");
    std::vector<Vec> basis{d.base};
    for (const Vec& x : d.factors[0].basis()) basis.push_back(x);
    try {
      lifted.factors[0] = Subspace::span(s, std::move(basis));
    } catch (const RankDeficient&) {
      bad("V_0 contains p_bar");
    }
  } else if (total != s.dim()) {
    bad("dimensions of V_0..V_k sum to " + std::to_string(total) + ", expected " +
        std::to_string(s.dim() - 1) + " (tangent to the quadric) or " + std::to_string(s.dim()));
  }
  WarpedDecomposition ambient = build_flat(lifted);
  if (!ambient.canonical)
    bad("quadric data requires <a_i, p_bar> = 1 and p_bar in V_0 (a_i = kappa p_bar - z_i)");
  WarpedDecomposition out = restrict_to_quadric(ambient);
  out.data = d;
  return out;
}

double rho(const WarpedDecomposition& w, const Vec& p0, int i) {
  return 1.0 + inner(w.factor(i).a, p0 - w.base);
}

bool in_domain(const WarpedDecomposition& w, const WarpedPoint& p, double tol) {
  return !domain_violation(w, p, tol).has_value();
}

Vec psi_forward(const WarpedDecomposition& w, const WarpedPoint& p) {
  if (auto v = domain_violation(w, p, 1e-8)) throw OutOfDomain("psi_forward: " + *v);
  const Vec& p0 = p.components[0];
  Vec out = p0;
  for (int i = 1; i <= w.k(); ++i)
    out.axpy(rho(w, p0, i), p.components[static_cast<std::size_t>(i)] - w.base);
  return out;
}

Vec psi_expanded(const WarpedDecomposition& w, const WarpedPoint& p) {
  if (auto v = domain_violation(w, p, 1e-8)) throw OutOfDomain("psi_expanded: " + *v);
  Vec x = p.components[0];
  for (auto it = w.stages.rbegin(); it != w.stages.rend(); ++it)
    x = stage_forward(w, *it, x, p.components);
  return x;
}

std::optional<std::string> image_violation(const WarpedDecomposition& w, const Vec& q) {
  if (!(q.space() == w.space)) return std::string("carrier");
  if (!w.stages.front().carrier.contains(q - w.base, 1e-9)) return std::string("carrier");
  if (w.restriction) {
    if (std::abs(sq(q) - 1.0 / w.restriction->kappa) >
        1e-9 * (1.0 + euclidean_dot(q, q) + std::abs(1.0 / w.restriction->kappa)))
      return std::string("quadric");
  }
  Vec x = q;
  for (const Stage& st : w.stages) {
    if (auto v = stage_violation(w, st, x)) return v;
    x = stage_inverse(w, st, x, false).x0;
  }
  if (w.restriction && w.restriction->cut &&
      !(inner(w.restriction->kappa * w.base, x) > 0.0))
    return std::string("quadric_component");
  return std::nullopt;
}

bool image_contains(const WarpedDecomposition& w, const Vec& q) {
  return !image_violation(w, q).has_value();
}

WarpedPoint psi_inverse(const WarpedDecomposition& w, const Vec& q) {
  if (auto v = image_violation(w, q))
    throw OutOfImage(*v, "psi_inverse: " + describe_predicate(*v));
  WarpedPoint out{std::vector<Vec>(static_cast<std::size_t>(w.k() + 1), Vec(w.space))};
  Vec x = q;
  for (const Stage& st : w.stages) {
    StageInverse si = stage_inverse(w, st, x);
    for (std::size_t j = 0; j < st.factors.size(); ++j)
      out.components[static_cast<std::size_t>(st.factors[j])] = std::move(si.points[j]);
    x = std::move(si.x0);
  }
  out.components[0] = std::move(x);
  return out;
}

Vec psi_pushforward(const WarpedDecomposition& w, const WarpedPoint& p, const std::vector<Vec>& v) {
  if (auto viol = domain_violation(w, p, 1e-8)) throw OutOfDomain("psi_pushforward: " + *viol);
  if (static_cast<int>(v.size()) != w.k() + 1)
    throw DimensionMismatch("psi_pushforward: expected " + std::to_string(w.k() + 1) +
                            " tangent components");
  const Vec& p0 = p.components[0];
  const Vec& v0 = v[0];
  if (!w.geodesic.contains(v0, 1e-8)) throw OutOfDomain("psi_pushforward: v_0 is not in V_0");
  if (w.restriction && !orthogonal(v0, p0, 1e-8))
    throw OutOfDomain("psi_pushforward: v_0 is not tangent to N_0(kappa)");
  Vec out = v0;
  for (int i = 1; i <= w.k(); ++i) {
    const Vec& pi = p.components[static_cast<std::size_t>(i)];
    const Vec& vi = v[static_cast<std::size_t>(i)];
    if (!is_tangent(w.factor(i).sphere, pi, vi, 1e-8))
      throw OutOfDomain("psi_pushforward: v_" + std::to_string(i) + " is not tangent to N_" +
                        std::to_string(i));
    out.axpy(inner(w.factor(i).a, v0), pi - w.base);
    out.axpy(rho(w, p0, i), vi);
  }
  return out;
}

namespace {

Vec curve_on(const SphericalSubmanifold& n, const Vec& p, const Vec& v, double h) {
  switch (n.kind) {
    case SphereKind::kPlane: return p + h * v;
    case SphereKind::kParaboloid: {
      const Vec x = n.tangent.project(p - n.base) + h * n.tangent.project(v);
      Vec out = n.base + x;
      out.axpy(-0.5 * sq(x), n.a);
      return out;
    }
    default: {
      const Vec r = p - *n.center + h * v;
      return *n.center + std::sqrt((1.0 / n.curvature) / sq(r)) * r;
    }
  }
}

}  // namespace

Vec psi_pushforward_numeric(const WarpedDecomposition& w, const WarpedPoint& p,
                            const std::vector<Vec>& v, double h) {
  if (static_cast<int>(v.size()) != w.k() + 1) throw DimensionMismatch("psi_pushforward_numeric: component count");
  auto at = [&](double t) {
    Vec x0 = p.components[0] + t * v[0];
    if (w.restriction) x0 = std::sqrt((1.0 / w.restriction->kappa) / sq(x0)) * x0;
    WarpedPoint q{{x0}};
    for (int i = 1; i <= w.k(); ++i)
      q.components.push_back(curve_on(w.factor(i).sphere, p.components[static_cast<std::size_t>(i)],
                                      v[static_cast<std::size_t>(i)], t));
    return psi_forward(w, q);
  };
  return (at(h) - at(-h)) / (2 * h);
}

double warped_norm(const WarpedDecomposition& w, const WarpedPoint& p, const std::vector<Vec>& v) {
  double s = sq(v[0]);
  for (int i = 1; i <= w.k(); ++i) {
    const double r = rho(w, p.components[0], i);
    s += r * r * sq(v[static_cast<std::size_t>(i)]);
  }
  return s;
}

Vec leaf_mean_curvature(const WarpedDecomposition& w, const WarpedPoint& p, int i) {
  if (auto v = domain_violation(w, p, 1e-8)) throw OutOfDomain("leaf_mean_curvature: " + *v);
  const Factor& f = w.factor(i);
  Vec lifted = f.a;
  lifted.axpy(f.kappa, p.components[static_cast<std::size_t>(i)] - w.base);
  return -lifted / rho(w, p.components[0], i);
}

WarpedDecomposition translate(const WarpedDecomposition& w, const Vec& t) {
  if (w.restriction) throw Unsupported("translate: a restricted decomposition is pinned to its quadric");
  if (w.data) {
    InitialData d = *w.data;
    d.base = d.base - t;
    return build(d);
  }
  if (w.outer && w.inner) return compose(translate(*w.outer, t), translate(*w.inner, t));
  throw Unsupported("translate: decomposition has no construction recipe");
}

Vec canonical_offset(const WarpedDecomposition& w) {
  Vec target(w.space);
  for (const Stage& st : w.stages) target += w.base - st.center;
  return w.base - target;
}

WarpedDecomposition canonicalize(const WarpedDecomposition& w) {
  if (w.canonical) return w;
  WarpedDecomposition out = translate(w, canonical_offset(w));
  if (!out.canonical) throw Error("canonicalize: translated decomposition is not canonical");
  return out;
}

WarpedDecomposition compose(const WarpedDecomposition& outer, const WarpedDecomposition& inner) {
  if (outer.restriction || inner.restriction)
    throw Unsupported("compose: restrict after composing");
  if (!(outer.space == inner.space)) throw DimensionMismatch("compose: different ambient spaces");
  const Subspace& icar = inner.stages.front().carrier;
  bool same = icar.dim() == outer.geodesic.dim();
  for (const Vec& x : icar.basis()) same = same && outer.geodesic.contains(x, kDataTol);
  if (!same) bad("compose: the inner decomposition must decompose the outer V_0");
  if (max_abs(outer.base - inner.base) > kDataTol * (1.0 + max_abs(outer.base)))
    bad("compose: base points differ");
  const std::vector<Vec> out_ab = all_a_and_b(outer);
  const std::vector<Vec> in_ab = all_a_and_b(inner);
  for (std::size_t i = 0; i < out_ab.size(); ++i) {
    if (!inner.geodesic.contains(out_ab[i], kDataTol))
      bad("compose: compatibility violated: outer warping vector " + std::to_string(i + 1) +
          " is not in the inner geodesic factor");
    for (const Vec& y : in_ab)
      if (!orthogonal(out_ab[i], y))
        bad("compose: compatibility violated: outer warping vector " + std::to_string(i + 1) +
            " is not orthogonal to the inner warping vectors");
  }

  WarpedDecomposition w{outer.space, outer.base, inner.geodesic, outer.factors, outer.stages,
                        CaseTag::kComposite, false, outer.connected && inner.connected,
                        std::nullopt, std::nullopt,
                        std::make_shared<const WarpedDecomposition>(outer),
                        std::make_shared<const WarpedDecomposition>(inner)};
  const int koff = outer.k();
  const int soff = static_cast<int>(outer.stages.size());
  for (Factor f : inner.factors) {
    f.stage += soff;
    w.factors.push_back(std::move(f));
  }
  for (Stage st : inner.stages) {
    for (int& i : st.factors) i += koff;
    w.stages.push_back(std::move(st));
  }
  w.canonical = compute_canonical(w);
  return w;
}

WarpedDecomposition restrict_to_quadric(const WarpedDecomposition& w) {
  if (w.restriction) throw InvalidInput("restrict_to_quadric: already restricted");
  if (!w.canonical) throw InvalidInput("restrict_to_quadric: decomposition is not in canonical form");
  const CausalClass cb = classify(w.base);
  if (cb != CausalClass::kSpacelike && cb != CausalClass::kTimelike)
    throw InvalidInput("restrict_to_quadric: base point is lightlike, kappa is undefined");
  const double kappa = 1.0 / sq(w.base);
  const Subspace t0 = orthogonal_complement(Subspace::span(w.space, {w.base}), w.geodesic);
  if (t0.dim() < 1) throw InvalidInput("restrict_to_quadric: geodesic factor would be a point");
  SphericalSubmanifold n0 = classify_sphere({w.base, t0, kappa * w.base}, w.connected);

  std::optional<Vec> ambient_cut;
  bool all_spacelike = w.space.index() == 1;
  for (const Factor& f : w.factors) all_spacelike = all_spacelike && f.kappa > 0 && !is_null(f.a);
  for (const Stage& st : w.stages) all_spacelike = all_spacelike && st.tag == CaseTag::kNonNull;
  if (all_spacelike && n0.component_restricted && kappa < 0) ambient_cut = kappa * canonical_offset(w);

  WarpedDecomposition out = w;
  const bool cut = n0.component_restricted;
  out.restriction = QuadricRestriction{kappa, std::move(n0), cut, std::move(ambient_cut)};
  return out;
}

TypeTag enumerate_type(const WarpedDecomposition& w) {
  const int nu = w.space.index();
  const bool restricted = w.restriction.has_value();
  const Subspace& geo = restricted ? w.restriction->geodesic_sphere.tangent : w.geodesic;
  const int m = geo.dim();

  int lightlike = 0, timelike = 0, special = 0;
  std::vector<int> sphere_dims;
  int special_dim = 0;
  for (const Factor& f : w.factors) {
    const CausalClass c = classify(f.a);
    if (c == CausalClass::kLightlike) {
      ++lightlike;
      special_dim = f.tangent.dim();
    } else if (c == CausalClass::kTimelike) {
      ++timelike;
      special_dim = f.tangent.dim();
    } else if (f.tangent.index() > 0) {
      ++special;
      special_dim = f.tangent.dim();
    } else {
      sphere_dims.push_back(f.tangent.dim());
    }
  }
  std::string rest;
  for (int d : sphere_dims) rest += " x_rho S^" + std::to_string(d);
  const std::string md = "^" + std::to_string(m);
  const std::string sd = "^" + std::to_string(special_dim);

  auto generic = [&]() {
    std::string desc = (restricted ? "Q" : "E") + md + "_" + std::to_string(geo.index());
    for (const Factor& f : w.factors) {
      const char* letter = f.sphere.kind == SphereKind::kPseudoSphere       ? "S"
                           : f.sphere.kind == SphereKind::kPseudoHyperbolic ? "H"
                                                                            : "P";
      desc += std::string(" x ") + letter + "^" + std::to_string(f.tangent.dim()) + "_" +
              std::to_string(f.tangent.index());
    }
    return TypeTag{"generic", desc};
  };
  auto tagged = [](std::string fam, std::string desc) { return TypeTag{std::move(fam), std::move(desc)}; };

  if (!restricted) {
    if (nu == 0) return tagged("E x S", "E" + md + rest);
    if (nu != 1) return generic();
    if (lightlike == 1 && timelike == 0 && special == 0)
      return tagged("M x_lambda E x S", "M" + md + " x_lambda E" + sd + rest);
    if (timelike == 1 && lightlike == 0 && special == 0)
      return tagged("M x_tau H x S", "M" + md + " x_tau H" + sd + rest);
    if (lightlike == 0 && timelike == 0) {
      if (geo.index() == 0 && special == 1)
        return tagged("E x dS x S", "E" + md + " x_rho dS" + sd + rest);
      if (geo.index() == 1 && special == 0) return tagged("M x S", "M" + md + rest);
    }
    return generic();
  }
  const double kappa = w.restriction->kappa;
  if (nu == 0 && kappa > 0) return tagged("S x S", "S" + md + rest);
  if (nu != 1) return generic();
  const std::string g = kappa > 0 ? "dS" : "H";
  if (lightlike == 1 && timelike == 0 && special == 0)
    return tagged(g + " x_lambda E x S", g + md + " x_lambda E" + sd + rest);
  if (timelike == 1 && lightlike == 0 && special == 0)
    return tagged(g + " x_tau H x S", g + md + " x_tau H" + sd + rest);
  if (lightlike == 0 && timelike == 0) {
    if (kappa > 0 && geo.index() == 0 && special == 1)
      return tagged("S x dS x S", "S" + md + " x_rho dS" + sd + rest);
    if (special == 0) return tagged(g + " x S", g + md + rest);
  }
  return generic();
}

ProductCheck check_no_product_decomposition(const WarpedDecomposition& w, int samples,
                                            std::uint64_t seed) {
  if (!w.restriction) return ProductCheck{false, true, 0, 0.0};
  Sampler sampler(w, seed);
  double min_grad = std::numeric_limits<double>::infinity();
  const double p2 = 1.0 / w.restriction->kappa;
  for (int s = 0; s < samples; ++s) {
    const Vec p0 = sampler.geodesic_point();
    for (const Factor& f : w.factors) {
      Vec g = f.a;
      g.axpy(-inner(f.a, p0) / p2, p0);
      min_grad = std::min(min_grad, euclidean_norm(g));
    }
  }
  return ProductCheck{true, min_grad > 1e-6, samples, min_grad};
}

Sampler::Sampler(const WarpedDecomposition& w, std::uint64_t seed, double margin)
    : w_(w), engine_(seed), margin_(margin) {}

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Vec Sampler::geodesic_point() {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Vec p0(w_.space);
    if (w_.restriction) {
      const SphericalSubmanifold& n0 = w_.restriction->geodesic_sphere;
      std::vector<double> u(static_cast<std::size_t>(n0.dim));
      for (double& x : u) x = uniform(-1.5, 1.5);
      p0 = parametrize(n0, u);
      if (!contains(n0, p0, 1e-9)) continue;
    } else {
      p0 = w_.base;
      for (const Vec& q : w_.geodesic.euclidean_basis()) p0.axpy(uniform(-3.0, 3.0), q);
    }
    bool ok = true;
    for (int i = 1; i <= w_.k() && ok; ++i) ok = rho(w_, p0, i) >= margin_;
    if (ok) return p0;
  }
  throw Error("Sampler: no geodesic-factor point found with rho_i >= margin");
}

Vec Sampler::factor_point(int i) {
  const SphericalSubmanifold& n = w_.factor(i).sphere;
  std::vector<double> u(static_cast<std::size_t>(n.dim));
  for (double& x : u) x = uniform(-1.2, 1.2);
  return parametrize(n, u);
}

WarpedPoint Sampler::point() {
  WarpedPoint p{{geodesic_point()}};
  for (int i = 1; i <= w_.k(); ++i) p.components.push_back(factor_point(i));
  return p;
}

std::vector<Vec> Sampler::tangent(const WarpedPoint& p) {
  std::vector<Vec> v;
  Vec v0(w_.space);
  for (const Vec& q : w_.geodesic.euclidean_basis()) v0.axpy(uniform(-1.0, 1.0), q);
  if (w_.restriction) {
    const Vec& p0 = p.components[0];
    v0.axpy(-inner(v0, p0) / sq(p0), p0);
  }
  v.push_back(std::move(v0));
  for (int i = 1; i <= w_.k(); ++i) {
    Vec vi(w_.space);
    for (const Vec& t : tangent_basis(w_.factor(i).sphere, p.components[static_cast<std::size_t>(i)]))
      vi.axpy(uniform(-1.0, 1.0), t);
    v.push_back(std::move(vi));
  }
  return v;
}

}  // namespace wpd
