#include <cmath>
#include <vector>

#include "doctest.h"
#include "support/random_isometry.hpp"
#include "support/random_seeds.hpp"
#include "warpdecomp/errors.hpp"
#include "warpdecomp/isometry.hpp"

using namespace wpd;
using wpd::testing::Rng;

namespace {

double max_diff(const Matrix& x, const Matrix& y) { return (x - y).max_abs(); }

Subspace span_of(const Space& s, std::initializer_list<Vec> vs) {
  return Subspace::span(s, std::vector<Vec>(vs));
}

Matrix plane_rotation(int n, int i, int j, double th) {
  Matrix r = Matrix::identity(n);
  r(i, i) = std::cos(th);
  r(i, j) = -std::sin(th);
  r(j, i) = std::sin(th);
  r(j, j) = std::cos(th);
  return r;
}

Matrix boost(int n, int i, int j, double s) {
  Matrix r = Matrix::identity(n);
  r(i, i) = std::cosh(s);
  r(i, j) = std::sinh(s);
  r(j, i) = std::sinh(s);
  r(j, j) = std::cosh(s);
  return r;
}

}  // namespace

TEST_CASE("standard paraboloid model") {
  const Space base(3, 1);
  const ParaboloidModel m = standard_paraboloid_model(base);
  CHECK(m.space() == Space(5, 2));
  CHECK(sq(m.a) == 0.0);
  CHECK(sq(m.b) == 0.0);
  CHECK(inner(m.a, m.b) == 1.0);
  const Vec x(base, {0.3, -1.2, 0.7});
  const Vec lx = standard_lift(m, x);
  CHECK(sq(lx) == doctest::Approx(sq(x)));
  // psi(x) lies on the paraboloid: <psi,psi> = 0 and <a,psi> = 1
  const Vec p = paraboloid_embed(m, lx);
  CHECK(std::abs(sq(p)) < 1e-14);
  CHECK(inner(m.a, p) == doctest::Approx(1.0));

  CHECK_THROWS_AS(paraboloid_model(m.v, m.a, 2.0 * m.b), InvalidInput);
  CHECK_THROWS_AS(paraboloid_model(m.v, m.a, m.a), InvalidInput);
  CHECK_THROWS_AS(paraboloid_model(Subspace::whole(m.space()), m.a, m.b), InvalidInput);
  CHECK_THROWS_AS(standard_lift(paraboloid_model(m.v, m.a, m.b), lx), Unsupported);
}

TEST_CASE("realize: identity, translation and rotation") {
  const Space base(2, 0);
  const ParaboloidModel m = standard_paraboloid_model(base);
  CHECK(max_diff(realize(identity_isometry(m)), Matrix::identity(4)) == 0.0);

  Rng rng(5);
  SUBCASE("translation lifts x -> x + v") {
    const Vec v = standard_lift(m, Vec(base, {0.4, -1.1}));
    const Matrix t = realize(paraboloid_isometry(m, Matrix::identity(4), v));
    for (int k = 0; k < 20; ++k) {
      const Vec x = standard_lift(m, rng.vec(base, -2, 2));
      CHECK(max_abs(paraboloid_embed(m, x + v) - apply(t, paraboloid_embed(m, x))) < 1e-9);
    }
  }
  SUBCASE("plane rotation fixes a and b") {
    const Matrix t = realize(paraboloid_isometry(m, standard_lift(m, plane_rotation(2, 0, 1, 0.7)), Vec(m.space())));
    CHECK(max_abs(apply(t, m.a) - m.a) < 1e-15);
    CHECK(max_abs(apply(t, m.b) - m.b) < 1e-15);
  }
  SUBCASE("boost in a Lorentzian fiber is equivariant") {
    const Space mb(2, 1);
    const ParaboloidModel mm = standard_paraboloid_model(mb);
    const auto iso = paraboloid_isometry(mm, standard_lift(mm, boost(2, 0, 1, 0.8)), Vec(mm.space()));
    const EquivarianceReport r = check_equivariance(iso);
    CHECK(r.pass);
    CHECK(r.max_error <= 1e-9 * r.scale);
    CHECK(check_equivariance(identity_isometry(mm)).max_error == 0.0);
  }
}

TEST_CASE("random paraboloid isometries") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(1, 6);
    const Space base(n, rng.integer(0, std::min(3, n)));
    const ParaboloidModel m = standard_paraboloid_model(base);
    const auto i1 = testing::random_standard_isometry(rng, m);
    const auto i2 = testing::random_standard_isometry(rng, m);
    INFO("trial " << trial << " " << base.name());
    const Matrix t1 = realize(i1), t2 = realize(i2);
    CHECK(pseudo_orthogonality_defect(m.space(), t1) <= 1e-9);
    CHECK(max_abs(apply(t1, m.a) - m.a) <= 1e-12);
    CHECK(max_diff(realize(compose_isometries(i1, i2)), t1 * t2) <= 1e-9);
    CHECK(check_equivariance(i1).pass);

    const ParaboloidIsometry d = decode(m, t1);
    CHECK(max_diff(d.B, i1.B) <= 1e-9);
    CHECK(max_abs(d.v - i1.v) <= 1e-9);
    // a different element realizes to a different map
    CHECK(max_diff(realize(compose_isometries(i1, i2)), t1) > 1e-6);
  }
}

TEST_CASE("composition: subgroups and identity") {
  const Space base(3, 1);
  const ParaboloidModel m = standard_paraboloid_model(base);
  const Matrix id = Matrix::identity(5);
  const Vec v1 = standard_lift(m, Vec(base, {1, 0.5, -0.2}));
  const Vec v2 = standard_lift(m, Vec(base, {-0.3, 2, 0.1}));
  const auto c = compose_isometries(paraboloid_isometry(m, id, v1), paraboloid_isometry(m, id, v2));
  CHECK(max_abs(c.v - (v1 + v2)) < 1e-15);
  CHECK(max_diff(c.B, projector(m)) < 1e-15);

  Rng rng(3);
  const auto iso = testing::random_standard_isometry(rng, m);
  const auto left = compose_isometries(identity_isometry(m), iso);
  const auto right = compose_isometries(iso, identity_isometry(m));
  CHECK(max_diff(left.B, iso.B) < 1e-14);
  CHECK(max_abs(right.v - iso.v) < 1e-14);
}

TEST_CASE("injectivity probe") {
  const Space base(3, 1);
  const ParaboloidModel m = standard_paraboloid_model(base);
  const ParaboloidIsometry d = decode(m, Matrix::identity(5));
  CHECK(max_diff(d.B, projector(m)) < 1e-15);
  CHECK(max_abs(d.v) < 1e-15);
  // a map agreeing with the identity on 2(n+2) probe vectors decodes to (I, 0)
  Rng rng(9);
  const auto iso = testing::random_standard_isometry(rng, m);
  const Matrix t = realize(iso);
  double moved = 0;
  for (int j = 0; j < 5; ++j) {
    moved = std::max(moved, max_abs(apply(t, Vec::unit(m.space(), j)) - Vec::unit(m.space(), j)));
    const Vec r = rng.vec(m.space());
    moved = std::max(moved, max_abs(apply(t, r) - r));
  }
  CHECK(moved > 1e-3);
}

TEST_CASE("isometry input validation") {
  const Space base(2, 1);
  const ParaboloidModel m = standard_paraboloid_model(base);
  Matrix stretch = Matrix::identity(4);
  stretch(1, 1) = 2.0;
  CHECK_THROWS_AS(paraboloid_isometry(m, stretch, Vec(m.space())), InvalidInput);
  CHECK_THROWS_AS(paraboloid_isometry(m, Matrix::identity(4), m.a), InvalidInput);
  CHECK_THROWS_AS(paraboloid_isometry(m, Matrix::identity(3), Vec(m.space())), DimensionMismatch);
  CHECK_THROWS_AS(decode(m, stretch), InvalidInput);
  CHECK_THROWS_AS(decode(m, boost(4, 0, 3, 0.5)), InvalidInput);  // moves a

  const ParaboloidModel other = paraboloid_model(m.v, 2.0 * m.a, 0.5 * m.b);
  CHECK_THROWS_AS(compose_isometries(identity_isometry(m), identity_isometry(other)), InvalidInput);
}

TEST_CASE("lift: identity and the polar rotation") {
  const Space e2(2, 0);
  InitialData d;
  d.base = Vec(e2, {1, 0});
  d.factors = {span_of(e2, {Vec::unit(e2, 0)}), span_of(e2, {Vec::unit(e2, 1)})};
  d.a = {Vec::unit(e2, 0)};
  const WarpedDecomposition w = build(d);

  const auto id = lift_factor_isometry(w, 1, quadric_factor_isometry(w, 1, Matrix::identity(2)));
  const double th = 0.9;
  const Matrix r = plane_rotation(2, 0, 1, th);
  const auto rot = lift_factor_isometry(w, 1, quadric_factor_isometry(w, 1, r));
  Sampler sampler(w, 11);
  for (int k = 0; k < 30; ++k) {
    const Vec q = psi_forward(w, sampler.point());
    CHECK(max_abs(id(q) - q) < 1e-12);
    CHECK(max_abs(rot(q) - apply(r, q)) < 1e-9);
  }
  CHECK_THROWS_AS(lift_factor_isometry(w, 1, FactorIsometry{Matrix::identity(2), Vec(e2, {0.1, 0})}),
                  InvalidInput);
  CHECK_THROWS_AS(lift_factor_isometry(w, 2, quadric_factor_isometry(w, 1, r)), InvalidInput);
  Matrix stretch = Matrix::identity(2);
  stretch(0, 0) = 2.0;
  CHECK_THROWS_AS(quadric_factor_isometry(w, 1, stretch), InvalidInput);
  CHECK_THROWS_AS(paraboloid_factor_isometry(w, 1, r, Vec(e2)), Unsupported);
}

TEST_CASE("lift: paraboloid translation matches realize") {
  const Space m3(3, 1);
  const Vec a(m3, {1, 1, 0});
  const Vec b(m3, {-0.5, 0.5, 0});
  InitialData d;
  d.base = b;
  d.factors = {span_of(m3, {a, b}), span_of(m3, {Vec::unit(m3, 2)})};
  d.a = {a};
  d.b = b;
  const WarpedDecomposition w = build(d);
  const Vec v(m3, {0, 0, 0.75});
  const auto lift = lift_factor_isometry(w, 1, paraboloid_factor_isometry(w, 1, Matrix::identity(3), v));
  const ParaboloidModel model = paraboloid_model(w.factor(1).tangent, a, b);
  const Matrix t = realize(paraboloid_isometry(model, Matrix::identity(3), v));
  CHECK(max_abs(apply(t, a) - a) == 0.0);
  Sampler sampler(w, 4);
  for (int k = 0; k < 30; ++k) {
    const Vec q = psi_forward(w, sampler.point());
    CHECK(max_abs(lift(q) - apply(t, q)) < 1e-9);
  }
  CHECK_THROWS_AS(quadric_factor_isometry(w, 1, Matrix::identity(3)), Unsupported);
}

TEST_CASE("lifted factor isometries preserve the metric and the foliations") {
  Rng rng(2026);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto seed = testing::random_canonical_seed(rng, {.n_max = 6});
    const WarpedDecomposition w = build(seed.data);
    const int i = rng.integer(1, w.k());
    INFO("trial " << trial << " " << w.space.name() << " factor " << i);
    const auto lift = lift_factor_isometry(w, i, testing::random_factor_isometry(rng, w, i));
    Sampler sampler(w, rng.next());
    for (int k = 0; k < 5; ++k) {
      const WarpedPoint p = sampler.point();
      const WarpedPoint fp = lift.on_factors(p);
      if (!in_domain(w, fp)) continue;
      const Vec q = psi_forward(w, p);
      const Vec fq = psi_forward(w, fp);
      if (image_violation(w, fq)) continue;
      CHECK(pullback_gram_defect(lift, q) <= 1e-7);
      const WarpedPoint back = psi_inverse(w, lift(q));
      for (int j = 0; j <= w.k(); ++j) {
        if (j == i) continue;
        CHECK(max_abs(back.components[static_cast<std::size_t>(j)] - p.components[static_cast<std::size_t>(j)]) <
              1e-9 * (1.0 + max_abs(q)));
      }
      ++checked;
    }
  }
  CHECK(checked > 100);
}
