// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,2,...] [--skip 6]
//
// Exit status 0 when every selected criterion passes, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "support/random_isometry.hpp"
#include "support/random_seeds.hpp"
#include "warpdecomp/circles.hpp"
#include "warpdecomp/cli.hpp"
#include "warpdecomp/errors.hpp"
#include "warpdecomp/isometry.hpp"
#include "warpdecomp/warp.hpp"

using namespace wpd;
using wpd::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "" : "!") + what);
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string measured(const std::string& name, double value, double tol) {
  return name + " " + fmt("%.2e", value) + " <= " + fmt("%.0e", tol);
}

double point_diff(const WarpedPoint& x, const WarpedPoint& y) {
  double d = 0;
  for (std::size_t i = 0; i < x.components.size(); ++i)
    d = std::max(d, max_abs(x.components[i] - y.components[i]));
  return d;
}

double euclid_sq_sum(const std::vector<Vec>& v) {
  double s = 0;
  for (const Vec& x : v) s += euclidean_dot(x, x);
  return s;
}

/// 200 canonical seeds over E^n_0, E^n_1, E^n_2 and E^n_3, 50 of each,
/// with the null case in every indefinite signature.
std::vector<testing::RandomSeed> canonical_seeds() {
  Rng rng(20240601);
  std::vector<testing::RandomSeed> out;
  for (int nu = 0; nu <= 3; ++nu) {
    testing::SeedOptions opt;
    opt.nu_min = nu;
    opt.nu_max = nu;
    opt.n_min = std::max(2, nu + 1);
    opt.null_share = nu == 0 ? 0.0 : 0.35;
    for (int i = 0; i < 50; ++i) out.push_back(testing::random_canonical_seed(rng, opt));
  }
  return out;
}

Outcome warped_metric() {
  Outcome o;
  double metric = 0, fd = 0;
  int nulls = 0, samples = 0;
  std::set<int> indices;
  Rng rng(1);
  for (const auto& rs : canonical_seeds()) {
    const WarpedDecomposition w = build(rs.data);
    nulls += rs.null_case;
    indices.insert(w.space.index());
    Sampler sampler(w, rng.next());
    for (int s = 0; s < 20; ++s) {
      const WarpedPoint p = sampler.point();
      const std::vector<Vec> v = sampler.tangent(p);
      const Vec an = psi_pushforward(w, p, v);
      metric = std::max(metric, std::abs(sq(an) - warped_norm(w, p, v)) / (1 + euclid_sq_sum(v)));
      fd = std::max(fd, max_abs(an - psi_pushforward_numeric(w, p, v)));
      ++samples;
    }
  }
  o.require(metric <= 1e-8, measured("metric defect / (1+sum|v_i|^2)", metric, 1e-8));
  o.require(fd <= 1e-6, measured("analytic vs FD pushforward", fd, 1e-6));
  o.require(indices == std::set<int>{0, 1, 2, 3} && nulls > 0,
            "200 seeds, nu in {0..3}, " + std::to_string(nulls) + " null, " + std::to_string(samples) + " samples");
  return o;
}

Outcome norm_identity() {
  Outcome o;
  double worst = 0;
  int samples = 0;
  Rng rng(2);
  for (const auto& rs : canonical_seeds()) {
    const WarpedDecomposition w = build(rs.data);
    if (!w.canonical) o.require(false, "seed not canonical");
    Sampler sampler(w, rng.next());
    for (int s = 0; s < 50; ++s) {
      const WarpedPoint p = sampler.point();
      worst = std::max(worst, std::abs(sq(psi_forward(w, p)) - sq(p.components[0])));
      ++samples;
    }
  }
  o.require(worst <= 1e-10, measured("|psi(p)^2 - p_0^2|", worst, 1e-10));
  o.notes.push_back(std::to_string(samples) + " samples");
  return o;
}

/// Image points moved off the image by breaking exactly one condition.
std::vector<std::pair<Vec, std::string>> branch_points(const WarpedDecomposition& w, const Vec& q) {
  std::vector<std::pair<Vec, std::string>> out;
  const Stage& st = w.stages.front();
  if (st.tag == CaseTag::kNull) {
    const Vec& a = w.factor(1).a;
    out.emplace_back(q - 2.0 * inner(a, q - st.center) * *st.b, "null_half_space");
    return out;
  }
  for (int i = 1; i <= w.k(); ++i) {
    const Factor& f = w.factor(i);
    out.emplace_back(q - f.w.project(q - st.center), "sgn:" + std::to_string(i));
  }
  return out;
}

Outcome round_trips() {
  Outcome o;
  double inv_fwd = 0, fwd_inv = 0;
  int in_image = 0, rejected = 0, named = 0, mismatched = 0, short_seeds = 0;
  Rng rng(3);
  for (const auto& rs : canonical_seeds()) {
    const WarpedDecomposition w = build(rs.data);
    Sampler sampler(w, rng.next());
    std::vector<Vec> images;
    for (int s = 0; s < 500; ++s) {
      const WarpedPoint p = sampler.point();
      const Vec q = psi_forward(w, p);
      inv_fwd = std::max(inv_fwd, point_diff(psi_inverse(w, q), p) / (1 + max_abs(q)));
      images.push_back(q);
    }
    int found = 0;
    for (int attempt = 0; attempt < 20000 && found < 500; ++attempt) {
      const Vec q = images[static_cast<std::size_t>(attempt) % images.size()] + rng.vec(w.space, -0.5, 0.5);
      const auto v = image_violation(w, q);
      try {
        const WarpedPoint p = psi_inverse(w, q);
        if (v) ++mismatched;
        // same margin as the domain sampler
        bool inside = true;
        for (int i = 1; i <= w.k(); ++i) inside = inside && rho(w, p.components[0], i) >= 0.2;
        if (!inside) continue;
        fwd_inv = std::max(fwd_inv, max_abs(psi_forward(w, p) - q) / (1 + max_abs(q)));
        ++found;
      } catch (const OutOfImage& e) {
        ++rejected;
        if (v && e.predicate() == *v) ++named;
        else ++mismatched;
      }
    }
    in_image += found;
    short_seeds += found < 500;
    for (const Vec& q : std::vector<Vec>(images.begin(), images.begin() + 5))
      for (const auto& [bad, expected] : branch_points(w, q)) {
        try {
          psi_inverse(w, bad);
          ++mismatched;
        } catch (const OutOfImage& e) {
          ++rejected;
          if (e.predicate() == expected) ++named;
          else ++mismatched;
        }
      }
  }
  o.require(inv_fwd <= 1e-9, measured("inverse(forward(p)) - p", inv_fwd, 1e-9));
  o.require(fwd_inv <= 1e-9, measured("forward(inverse(q)) - q", fwd_inv, 1e-9));
  o.require(short_seeds == 0, std::to_string(in_image) + " in-image samples");
  o.require(mismatched == 0 && named > 0,
            std::to_string(named) + "/" + std::to_string(rejected) + " rejections named, " +
                std::to_string(mismatched) + " wrong");
  return o;
}

Outcome composition() {
  Outcome o;
  Rng rng(4);
  double direct = 0, nested = 0, invariance = 0;
  int composites = 0, with_null = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto rc = testing::random_composite(rng);
    const WarpedDecomposition& w = rc.composed;
    if (w.k() < 2) continue;
    ++composites;
    for (const Stage& st : w.stages) with_null += st.tag == CaseTag::kNull;
    std::optional<WarpedDecomposition> one_shot;
    if (rc.direct) one_shot = build(*rc.direct);
    Sampler sampler(w, rng.next());
    for (int s = 0; s < 20; ++s) {
      const WarpedPoint p = sampler.point();
      const Vec q = psi_forward(w, p);
      WarpedPoint ip{{p.components[0]}};
      for (int i = rc.outer.k() + 1; i <= w.k(); ++i) ip.components.push_back(p.components[static_cast<std::size_t>(i)]);
      const Vec x = psi_forward(rc.inner, ip);
      WarpedPoint op{{x}};
      for (int i = 1; i <= rc.outer.k(); ++i) op.components.push_back(p.components[static_cast<std::size_t>(i)]);
      nested = std::max(nested, max_abs(psi_forward(rc.outer, op) - q));
      if (one_shot) direct = std::max(direct, max_abs(psi_forward(*one_shot, p) - q));
      for (int i = 1; i <= rc.outer.k(); ++i)
        invariance = std::max(invariance, std::abs(rho(rc.outer, x, i) - rho(rc.outer, p.components[0], i)));
    }
  }
  o.require(nested <= 1e-10, measured("compose vs nested phi_1(phi_2)", nested, 1e-10));
  o.require(direct <= 1e-10, measured("compose vs one-shot master formula", direct, 1e-10));
  o.require(invariance <= 1e-10, measured("rho_1 o phi_2 - rho_1", invariance, 1e-10));
  o.notes.push_back(std::to_string(composites) + " composites, " + std::to_string(with_null) + " null stages");
  return o;
}

Outcome restriction() {
  Outcome o;
  Rng rng(5);
  double quadric = 0, leaf = 0;
  int restricted = 0;
  for (const auto& rs : canonical_seeds()) {
    const WarpedDecomposition flat = build(rs.data);
    if (std::abs(sq(flat.base)) < 0.1 || flat.geodesic.dim() < 2) continue;
    const WarpedDecomposition w = restrict_to_quadric(flat);
    ++restricted;
    Sampler sampler(w, rng.next());
    for (int s = 0; s < 20; ++s) {
      const Vec q = psi_forward(w, sampler.point());
      quadric = std::max(quadric, std::abs(sq(q) - 1.0 / w.restriction->kappa));
    }
    const WarpedPoint p = sampler.point();
    for (int i = 1; i <= w.k(); ++i) {
      const SphericalSubmanifold& n = w.factor(i).sphere;
      const Vec& pi = p.components[static_cast<std::size_t>(i)];
      const auto frame = Subspace::span(w.space, tangent_basis(n, pi)).pseudo_orthonormal_basis();
      const double h = 1e-3;
      const double r = rho(w, p.components[0], i);
      Vec trace(w.space);
      for (const Vec& e : frame) {
        auto at = [&](double t) {
          WarpedPoint x = p;
          x.components[static_cast<std::size_t>(i)] = quadric_geodesic(n, pi, e, t);
          return psi_forward(w, x);
        };
        trace += ((at(h) - 2.0 * at(0) + at(-h)) / (h * h)) / (r * r * sq(e));
      }
      const Vec h_fd = trace / static_cast<double>(frame.size());
      WarpedPoint at_base = p;
      at_base.components[static_cast<std::size_t>(i)] = w.base;
      leaf = std::max(leaf, max_abs(h_fd - leaf_mean_curvature(w, p, i)));
      leaf = std::max(leaf, max_abs(leaf_mean_curvature(w, at_base, i) + w.factor(i).a / r));
    }
  }
  o.require(quadric <= 1e-10, measured("|q^2 - 1/kappa|", quadric, 1e-10));
  o.require(leaf <= 1e-5, measured("leaf H: FD second fundamental form vs -a_i/rho_i", leaf, 1e-5));

  // <kappa c, q> > 0 in Minkowski space with a spacelike a
  const Space m3(3, 1);
  auto seed = [&](double t) {
    InitialData d;
    d.base = Vec(m3, {t, 1, 0});
    d.factors = {Subspace::span(m3, {Vec::unit(m3, 0), Vec::unit(m3, 1)}), Subspace::span(m3, {Vec::unit(m3, 2)})};
    d.a = {Vec::unit(m3, 1)};
    d.connected = true;
    return restrict_to_quadric(build(d));
  };
  int cut_ok = 0, cut_total = 0;
  {
    const WarpedDecomposition w = seed(1.5);
    Sampler sampler(w, 9);
    for (int s = 0; s < 50; ++s) {
      const Vec q = psi_forward(w, sampler.point());
      const Vec far = -q;
      cut_total += 2;
      cut_ok += w.restriction->ambient_cut && inner(*w.restriction->ambient_cut, q) > 0 && image_contains(w, q);
      cut_ok += image_violation(w, far) == std::optional<std::string>("quadric_component");
    }
  }
  // <kappa p_bar, p_0> > 0 on the timelike geodesic circle
  {
    const WarpedDecomposition w = seed(0.5);
    Sampler sampler(w, 2);
    for (int s = 0; s < 50; ++s) {
      const WarpedPoint p = sampler.point();
      WarpedPoint other = p;
      const double t = p.components[0][0];
      other.components[0] = Vec(m3, {t, -std::sqrt(0.75 + t * t), 0});
      cut_total += 2;
      cut_ok += inner(w.restriction->kappa * w.base, p.components[0]) > 0;
      cut_ok += !in_domain(w, other);
    }
  }
  o.require(cut_ok == cut_total, "connectedness cuts " + std::to_string(cut_ok) + "/" + std::to_string(cut_total));
  o.notes.push_back(std::to_string(restricted) + " restricted decompositions");
  return o;
}

Outcome circles() {
  Outcome o;
  const Space e2(2, 0), m2(2, 1);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(2 * kPi * i / 200);
  struct Case {
    const char* name;
    CircleState st;
  };
  std::vector<Case> cases;
  for (double k : {0.5, 1.0, 2.0}) {
    cases.push_back({"Euclidean", {Vec(e2), Vec::unit(e2, 0), k * Vec::unit(e2, 1)}});
    cases.push_back({"hyperbolic", {Vec(m2), Vec::unit(m2, 0), k * Vec::unit(m2, 1)}});
    cases.push_back({"de Sitter", {Vec(m2), Vec::unit(m2, 1), k * Vec::unit(m2, 0)}});
  }
  for (const Case& c : cases) {
    const double k = circle_curvature(c.st);
    const double xx0 = sq(c.st.X), yy0 = sq(c.st.Y), xy0 = inner(c.st.X, c.st.Y);
    double dev = 0, drift = 0;
    for (const CircleSample& s : circle_integrate(c.st, grid)) {
      dev = std::max(dev, max_abs(s.p - circle_closed_form(c.st, s.t)));
      drift = std::max({drift, std::abs(s.xx - xx0), std::abs(s.yy - yy0), std::abs(s.xy - xy0)});
    }
    const bool ok = dev <= 1e-6 && drift <= 1e-6;
    o.require(ok, std::string(c.name) + " k=" + fmt("%g", k) + " dev " + fmt("%.1e", dev) + " drift " +
                      fmt("%.1e", drift));
  }
  return o;
}

Outcome sphere_geodesics() {
  Outcome o;
  Rng rng(7);
  std::map<std::string, int> seen;
  double worst = 0;
  for (const auto& rs : canonical_seeds()) {
    const WarpedDecomposition w = build(rs.data);
    Sampler sampler(w, rng.next());
    for (int i = 1; i <= w.k(); ++i) {
      const SphericalSubmanifold& n = w.factor(i).sphere;
      const Vec p = sampler.factor_point(i);
      Vec v = rng.combination(w.space, tangent_basis(n, p));
      if (std::abs(sq(v)) < 0.05 * euclidean_dot(v, v)) continue;
      v = v / std::sqrt(std::abs(sq(v)));
      const CircleReport r = sphere_geodesic_is_circle(n, p, v);
      worst = std::max(worst, r.max_residual);
      std::string kind = n.kind == SphereKind::kParaboloid         ? "paraboloid"
                         : n.kind == SphereKind::kPseudoHyperbolic ? "hyperbolic"
                         : n.kind == SphereKind::kPlane            ? "plane"
                         : n.tangent.index() > 0                   ? "de Sitter"
                                                                   : "sphere";
      ++seen[kind];
    }
  }
  o.require(worst <= 1e-5, measured("circle equation residual", worst, 1e-5));
  std::string kinds;
  bool all = true;
  for (const char* k : {"sphere", "hyperbolic", "de Sitter", "paraboloid"}) {
    kinds += std::string(kinds.empty() ? "" : ", ") + k + " " + std::to_string(seen[k]);
    all = all && seen[k] > 0;
  }
  o.require(all, kinds);
  return o;
}

Outcome mean_curvature_identities() {
  Outcome o;
  Rng rng(8);
  int quadrics = 0, paraboloids = 0;
  double qerr = 0, perr = 0;
  std::vector<testing::RandomSeed> seeds = canonical_seeds();
  testing::SeedOptions null_opt;
  null_opt.nu_min = 1;
  null_opt.null_share = 1.0;
  for (int i = 0; i < 100; ++i) seeds.push_back(testing::random_canonical_seed(rng, null_opt));
  for (const auto& rs : seeds) {
    if (quadrics >= 50 && paraboloids >= 50) break;
    const WarpedDecomposition w = build(rs.data);
    Sampler sampler(w, rng.next());
    for (int i = 1; i <= w.k(); ++i) {
      const SphericalSubmanifold& n = w.factor(i).sphere;
      const bool para = n.kind == SphereKind::kParaboloid;
      if ((para ? paraboloids : quadrics) >= 50) continue;
      const Vec p = sampler.factor_point(i);
      const auto frame = Subspace::span(w.space, tangent_basis(n, p)).pseudo_orthonormal_basis();
      // normal part of the acceleration of curves through p with velocity e
      const double h = 1e-4;
      Vec trace(w.space);
      for (const Vec& e : frame) {
        Vec acc = (testing::factor_curve(n, p, e, h) - 2.0 * p + testing::factor_curve(n, p, e, -h)) / (h * h);
        if (!para) {
          const Vec r = p - *n.center;
          acc = (inner(acc, r) / sq(r)) * r;
        }
        trace += acc / sq(e);
      }
      const Vec h_fd = trace / static_cast<double>(frame.size());
      if (para) {
        perr = std::max(perr, max_abs(h_fd + n.a));
        ++paraboloids;
      } else {
        const Vec r = p - *n.center;
        qerr = std::max(qerr, max_abs(h_fd + r / sq(r)));
        ++quadrics;
      }
    }
  }
  o.require(quadrics >= 50, measured("hyperquadrics H + r/r^2", qerr, 1e-5));
  o.require(paraboloids >= 50, measured("paraboloids H + a", perr, 1e-5));
  o.pass = o.pass && qerr <= 1e-5 && perr <= 1e-5;
  o.notes.push_back(std::to_string(quadrics) + " + " + std::to_string(paraboloids) + " points");
  return o;
}

Outcome dual_lightlike() {
  Outcome o;
  Rng rng(9);
  double worst = 0;
  int trials = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int nu = rng.integer(1, 4);
    const int n = rng.integer(nu + 1, 8);
    const int k = rng.integer(1, std::min(nu, n - nu));
    const Space s(n, nu);
    const Matrix frame = pseudo_orthogonal_sample(s, rng.next(), 0.4);
    std::vector<Vec> a;
    for (int i = 0; i < k; ++i)
      a.push_back(apply(frame, (Vec::unit(s, i) + Vec::unit(s, nu + i)) * rng.uniform(0.5, 2.0)));
    const auto b = dual_lightlike_basis(a);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) {
        worst = std::max(worst, std::abs(inner(a[i], b[j]) - (i == j ? 1.0 : 0.0)));
        worst = std::max(worst, std::abs(inner(b[i], b[j])));
      }
    ++trials;
  }
  o.require(worst <= 1e-9, measured("<a_i,b_j> - delta_ij, <b_i,b_j>", worst, 1e-9));
  o.notes.push_back(std::to_string(trials) + " bases, k <= nu <= 4");
  return o;
}

Outcome paraboloid_group() {
  Outcome o;
  Rng rng(10);
  double defect = 0, fixes = 0, hom = 0, equiv = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(1, 6);
    const Space base(n, rng.integer(0, std::min(3, n)));
    const ParaboloidModel m = standard_paraboloid_model(base);
    const auto i1 = testing::random_standard_isometry(rng, m);
    const auto i2 = testing::random_standard_isometry(rng, m);
    const Matrix t1 = realize(i1), t2 = realize(i2);
    defect = std::max(defect, pseudo_orthogonality_defect(m.space(), t1));
    fixes = std::max(fixes, max_abs(apply(t1, m.a) - m.a));
    hom = std::max(hom, (realize(compose_isometries(i1, i2)) - t1 * t2).max_abs());
    const EquivarianceReport e = check_equivariance(i1);
    equiv = std::max(equiv, e.max_error / e.scale);
  }
  o.require(defect <= 1e-9, measured("realize metric defect", defect, 1e-9));
  o.require(fixes <= 1e-9, measured("|T a - a|", fixes, 1e-9));
  o.require(hom <= 1e-9, measured("homomorphism", hom, 1e-9));
  o.require(equiv <= 1e-9, measured("equivariance", equiv, 1e-9));

  double lift = 0;
  int lifts = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto seed = testing::random_canonical_seed(rng, {.n_max = 6});
    const WarpedDecomposition w = build(seed.data);
    const int i = rng.integer(1, w.k());
    const auto l = lift_factor_isometry(w, i, testing::random_factor_isometry(rng, w, i));
    Sampler sampler(w, rng.next());
    for (int k = 0; k < 5; ++k) {
      const WarpedPoint p = sampler.point();
      const WarpedPoint fp = l.on_factors(p);
      if (!in_domain(w, fp) || image_violation(w, psi_forward(w, fp))) continue;
      lift = std::max(lift, pullback_gram_defect(l, psi_forward(w, p)));
      ++lifts;
    }
  }
  o.require(lift <= 1e-7 && lifts > 100, measured("lifted pullback metric defect", lift, 1e-7));
  o.notes.push_back("100 (B,v) pairs, " + std::to_string(lifts) + " lifted samples");
  return o;
}

InitialData map_data(const InitialData& d, const Matrix& m) {
  InitialData out = d;
  const Space& s = d.base.space();
  out.base = apply(m, d.base);
  for (auto& v : out.factors) {
    std::vector<Vec> basis;
    for (const Vec& x : v.basis()) basis.push_back(apply(m, x));
    v = Subspace::span(s, std::move(basis));
  }
  for (auto& a : out.a) a = apply(m, a);
  if (out.b) out.b = apply(m, *out.b);
  return out;
}

Outcome type_enumeration() {
  Outcome o;
  Rng rng(11);
  const std::set<std::string> minkowski{"M x S", "E x dS x S", "M x_tau H x S", "M x_lambda E x S"};
  std::set<std::string> euclid_seen, mink_seen;
  int stray = 0, variant = 0, total = 0;
  for (int nu = 0; nu <= 1; ++nu) {
    testing::SeedOptions opt;
    opt.nu_min = nu;
    opt.nu_max = nu;
    opt.null_share = nu ? 0.3 : 0.0;
    for (int trial = 0; trial < 150; ++trial) {
      const auto rs = testing::random_canonical_seed(rng, opt);
      const WarpedDecomposition w = build(rs.data);
      const TypeTag t = enumerate_type(w);
      (nu ? mink_seen : euclid_seen).insert(t.family);
      stray += nu ? !minkowski.count(t.family) : t.family != "E x S";
      const Matrix m = pseudo_orthogonal_sample(w.space, rng.next(), 0.5);
      const TypeTag tm = enumerate_type(build(map_data(rs.data, m)));
      variant += tm.family != t.family || tm.descriptor != t.descriptor;
      ++total;
    }
  }
  o.require(euclid_seen == std::set<std::string>{"E x S"}, "E^n_0: single family E x S");
  o.require(mink_seen == minkowski && stray == 0,
            "E^n_1: " + std::to_string(mink_seen.size()) + " families, " + std::to_string(stray) + " outside");
  o.require(variant == 0, std::to_string(variant) + "/" + std::to_string(total) + " tags changed by O(n,nu) maps");
  return o;
}

struct CliResult {
  int code;
  std::string out;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "warpdecomp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

Outcome cli_determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path data = WARPDECOMP_TEST_DATA;
  int identical = 0, runs = 0;
  double round = 0;
  int round_samples = 0;
  for (const char* name : {"polar.json", "null.json", "sphere.json"}) {
    const std::string path = (data / name).string();
    const CliResult r1 = cli({"validate", "--input", path, "--seed", "11", "--samples", "200"});
    const CliResult r2 = cli({"validate", "--input", path, "--seed", "11", "--samples", "200"});
    ++runs;
    identical += r1.code == 0 && r1.out == r2.out && !r1.out.empty();

    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    const WarpedDecomposition w = cli::build_seed(cli::parse_seed(text.str()));
    Sampler sampler(w, 5);
    for (int s = 0; s < 20; ++s) {
      const WarpedPoint p = sampler.point();
      nlohmann::json pj = nlohmann::json::array();
      for (const Vec& c : p.components) {
        nlohmann::json cj = nlohmann::json::array();
        for (int d = 0; d < w.space.dim(); ++d) cj.push_back(c[d]);
        pj.push_back(cj);
      }
      const CliResult e = cli({"eval", "--input", path, "--point", pj.dump()});
      const CliResult i = cli({"invert", "--input", path, "--ambient-point", nlohmann::json::parse(e.out).dump()});
      if (e.code || i.code) {
        round = INFINITY;
        continue;
      }
      const auto back = nlohmann::json::parse(i.out);
      for (std::size_t c = 0; c < p.components.size(); ++c)
        for (int d = 0; d < w.space.dim(); ++d)
          round = std::max(round, std::abs(back[c][static_cast<std::size_t>(d)].get<double>() - p.components[c][d]));
      ++round_samples;
    }
  }
  o.require(identical == runs, std::to_string(identical) + "/" + std::to_string(runs) + " validate reports identical");
  o.require(round <= 1e-9, measured("CLI eval/invert round trip", round, 1e-9) + " (" +
                               std::to_string(round_samples) + " points)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warped-product decomposition acceptance suite"};
  std::vector<int> only, skip;
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  app.add_option("--skip", skip, "skip these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"warped-metric isometry", warped_metric},
      {"norm identity", norm_identity},
      {"round trips and rejections", round_trips},
      {"composition", composition},
      {"restriction to hyperquadrics", restriction},
      {"circles: RK4 vs closed form", circles},
      {"geodesics of spherical factors", sphere_geodesics},
      {"mean-curvature identities", mean_curvature_identities},
      {"dual lightlike bases", dual_lightlike},
      {"paraboloid isometry group", paraboloid_group},
      {"type enumeration", type_enumeration},
      {"CLI determinism", cli_determinism},
  };

  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    if (std::find(skip.begin(), skip.end(), id) != skip.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("%s %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, secs, detail.c_str());
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s total %.1fs, %d failed\n", failed ? "FAIL" : "PASS", total, failed);
  return failed ? 1 : 0;
}
