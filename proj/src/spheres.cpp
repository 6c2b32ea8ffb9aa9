#include "warpdecomp/spheres.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "warpdecomp/errors.hpp"

namespace wpd {

const char* to_string(SphereKind k) noexcept {
  switch (k) {
    case SphereKind::kPlane: return "Plane";
    case SphereKind::kPseudoSphere: return "PseudoSphere";
    case SphereKind::kPseudoHyperbolic: return "PseudoHyperbolic";
    case SphereKind::kParaboloid: return "Paraboloid";
  }
  return "unknown";
}

namespace {

void require_orthogonal(const Vec& x, const Subspace& v, double tol, const char* what) {
  for (const Vec& b : v.basis()) {
    if (std::abs(inner(x, b)) > tol * (1.0 + euclidean_norm(x) * euclidean_norm(b)))
      throw InvalidInput(std::string(what));
  }
}

}  // namespace

SphericalSubmanifold classify_sphere(const SphereInitialData& d, bool restrict_component) {
  const Space& s = d.base.space();
  if (!(d.a.space() == s) || !(d.tangent.space() == s))
    throw DimensionMismatch("classify_sphere: data from different spaces");
  if (d.tangent.dim() < 1) throw InvalidInput("classify_sphere: tangent space is trivial");
  if (d.tangent.degenerate())
    throw DegenerateSubspace("classify_sphere: tangent space is degenerate");
  require_orthogonal(d.a, d.tangent, 1e-9, "classify_sphere: a is not orthogonal to V");

  const CausalClass cls = classify(d.a);
  const Vec z = -d.a;
  const int m = d.tangent.dim();
  const int mu = d.tangent.index();
  switch (cls) {
    case CausalClass::kZero:
      return SphericalSubmanifold{SphereKind::kPlane, d.base, d.tangent, Vec(s),
                                  d.tangent, std::nullopt, 0.0, Vec(s), m, mu,
                                  false, false};
    case CausalClass::kLightlike: {
      Subspace w = direct_sum(Subspace::span(s, {d.a}), d.tangent);
      return SphericalSubmanifold{SphereKind::kParaboloid, d.base, d.tangent, d.a,
                                  std::move(w), std::nullopt, 0.0, z, m, mu,
                                  false, false};
    }
    case CausalClass::kSpacelike:
    case CausalClass::kTimelike: {
      const double kt = sq(d.a);
      Vec c = d.base - d.a / kt;
      Subspace w = direct_sum(Subspace::span(s, {d.a}), d.tangent);
      const bool disconnected = (mu == 0 && kt < 0) || (mu == m && kt > 0);
      const SphereKind kind =
          kt > 0 ? SphereKind::kPseudoSphere : SphereKind::kPseudoHyperbolic;
      return SphericalSubmanifold{kind, d.base, d.tangent, d.a, std::move(w),
                                  std::move(c), kt, z, m, mu, disconnected,
                                  disconnected && restrict_component};
    }
  }
  throw InvalidInput("classify_sphere: unreachable");
}

SphereInitialData quadric_sphere_data(const Vec& base, const Subspace& tangent, const Vec& z) {
  const double p2 = sq(base);
  if (classify(base) != CausalClass::kSpacelike && classify(base) != CausalClass::kTimelike)
    throw InvalidInput("quadric_sphere_data: base point is null, curvature undefined");
  require_orthogonal(base, tangent, 1e-9, "quadric_sphere_data: V is not tangent to the quadric");
  require_orthogonal(z, tangent, 1e-9, "quadric_sphere_data: z is not normal to V");
  if (std::abs(inner(z, base)) > 1e-9 * (1.0 + euclidean_norm(z) * euclidean_norm(base)))
    throw InvalidInput("quadric_sphere_data: z is not tangent to the quadric");
  return SphereInitialData{base, tangent, base / p2 - z};
}

bool restricts_to_quadric(const SphereInitialData& d, double tol) {
  const CausalClass cb = classify(d.base);
  if (cb != CausalClass::kSpacelike && cb != CausalClass::kTimelike) return false;
  const double scale = 1.0 + euclidean_norm(d.base);
  for (const Vec& b : d.tangent.basis())
    if (std::abs(inner(b, d.base)) > tol * scale * (1.0 + euclidean_norm(b))) return false;
  return std::abs(inner(d.a, d.base) - 1.0) <= tol * scale * (1.0 + euclidean_norm(d.a));
}

SphericalSubmanifold central_hyperquadric(const Vec& base, bool restrict_component) {
  const CausalClass cb = classify(base);
  if (cb != CausalClass::kSpacelike && cb != CausalClass::kTimelike)
    throw InvalidInput("central_hyperquadric: base point is null");
  const Subspace tangent = orthogonal_complement(Subspace::span(base.space(), {base}));
  return classify_sphere(SphereInitialData{base, tangent, base / sq(base)}, restrict_component);
}

bool contains(const SphericalSubmanifold& n, const Vec& p, double tol) {
  if (!(p.space() == n.base.space())) return false;
  switch (n.kind) {
    case SphereKind::kPlane:
      return n.tangent.contains(p - n.base, tol);
    case SphereKind::kParaboloid: {
      const Vec x = n.tangent.project(p - n.base);
      Vec recon = n.base + x;
      recon.axpy(-0.5 * sq(x), n.a);
      return euclidean_norm(p - recon) <= tol * (1.0 + euclidean_norm(p - n.base) + euclidean_norm(x) * euclidean_norm(x));
    }
    case SphereKind::kPseudoSphere:
    case SphereKind::kPseudoHyperbolic: {
      const Vec r = p - *n.center;
      if (!n.carrier.contains(r, tol)) return false;
      const double e2 = euclidean_dot(r, r);
      if (std::abs(sq(r) - 1.0 / n.curvature) > tol * (1.0 + e2 + 1.0 / std::abs(n.curvature)))
        return false;
      if (n.component_restricted && inner(n.a, r) <= 0.0) return false;
      return true;
    }
  }
  return false;
}

Vec parametrize(const SphericalSubmanifold& n, std::span<const double> u) {
  if (static_cast<int>(u.size()) != n.dim)
    throw OutOfDomain("parametrize: expected " + std::to_string(n.dim) + " chart coordinates");
  for (double x : u)
    if (!std::isfinite(x)) throw OutOfDomain("parametrize: non-finite chart coordinate");

  if (n.kind == SphereKind::kPlane || n.kind == SphereKind::kParaboloid) {
    Vec x(n.base.space());
    for (int i = 0; i < n.dim; ++i) x.axpy(u[static_cast<std::size_t>(i)], n.tangent.basis()[static_cast<std::size_t>(i)]);
    Vec p = n.base + x;
    if (n.kind == SphereKind::kParaboloid) p.axpy(-0.5 * sq(x), n.a);
    return p;
  }

  const Vec r0 = n.base - *n.center;
  const double radius = pseudo_norm(r0);
  const Vec e0 = r0 / radius;
  const double eps0 = n.curvature > 0 ? 1.0 : -1.0;
  const std::vector<Vec> frame = n.tangent.pseudo_orthonormal_basis();

  Vec x = e0;
  for (int j = n.dim - 1; j >= 0; --j) {
    const Vec& f = frame[static_cast<std::size_t>(j)];
    const double sigma = sq(f) > 0 ? 1.0 : -1.0;
    const double theta = u[static_cast<std::size_t>(j)];
    const double alpha = inner(x, e0) / eps0;
    const double beta = inner(x, f) / sigma;
    Vec rest = x;
    rest.axpy(-alpha, e0);
    rest.axpy(-beta, f);
    Vec re0(n.base.space()), rf(n.base.space());
    if (sigma == eps0) {
      if (std::abs(theta) > std::numbers::pi)
        throw OutOfDomain("parametrize: circular chart coordinate outside [-pi, pi]");
      re0 = std::cos(theta) * e0 + std::sin(theta) * f;
      rf = -std::sin(theta) * e0 + std::cos(theta) * f;
    } else {
      re0 = std::cosh(theta) * e0 + std::sinh(theta) * f;
      rf = std::sinh(theta) * e0 + std::cosh(theta) * f;
    }
    x = rest + alpha * re0 + beta * rf;
  }
  return *n.center + radius * x;
}

Vec mean_curvature(const SphericalSubmanifold& n, const Vec& p) {
  if (!contains(n, p, 1e-8)) throw OutOfDomain("mean_curvature: point is not on the submanifold");
  switch (n.kind) {
    case SphereKind::kPlane: return Vec(p.space());
    case SphereKind::kParaboloid: return -n.a;
    default: {
      const Vec r = p - *n.center;
      return -r / sq(r);
    }
  }
}

std::vector<Vec> tangent_basis(const SphericalSubmanifold& n, const Vec& p) {
  if (!contains(n, p, 1e-8)) throw OutOfDomain("tangent_basis: point is not on the submanifold");
  switch (n.kind) {
    case SphereKind::kPlane: return n.tangent.basis();
    case SphereKind::kParaboloid: {
      const Vec x = n.tangent.project(p - n.base);
      std::vector<Vec> out;
      for (const Vec& w : n.tangent.basis()) out.push_back(w - inner(w, x) * n.a);
      return out;
    }
    default: {
      const Vec r = p - *n.center;
      return orthogonal_complement(Subspace::span(p.space(), {r}), n.carrier).basis();
    }
  }
}

bool is_tangent(const SphericalSubmanifold& n, const Vec& p, const Vec& v, double tol) {
  const double scale = 1.0 + euclidean_norm(v);
  switch (n.kind) {
    case SphereKind::kPlane: return n.tangent.contains(v, tol);
    case SphereKind::kParaboloid: {
      const Vec x = n.tangent.project(p - n.base);
      const Vec w = n.tangent.project(v);
      return euclidean_norm(v - (w - inner(w, x) * n.a)) <= tol * scale * (1.0 + euclidean_norm(x));
    }
    default: {
      const Vec r = p - *n.center;
      return n.carrier.contains(v, tol) &&
             std::abs(inner(v, r)) <= tol * scale * (1.0 + euclidean_norm(r));
    }
  }
}

Vec quadric_geodesic(const SphericalSubmanifold& n, const Vec& p, const Vec& v, double t) {
  if (!contains(n, p, 1e-8)) throw OutOfDomain("quadric_geodesic: point is not on the submanifold");
  if (!is_tangent(n, p, v, 1e-8)) throw OutOfDomain("quadric_geodesic: velocity is not tangent");
  const CausalClass cv = classify(v);
  if (cv == CausalClass::kLightlike || cv == CausalClass::kZero)
    throw Unsupported("quadric_geodesic: null initial velocity");

  switch (n.kind) {
    case SphereKind::kPlane: return p + t * v;
    case SphereKind::kParaboloid: {
      const Vec x = n.tangent.project(p - n.base) + t * n.tangent.project(v);
      Vec out = n.base + x;
      out.axpy(-0.5 * sq(x), n.a);
      return out;
    }
    default: {
      // r^2 and <r, v> as given, so rounding in p and v is not amplified by cosh
      const Vec r = p - *n.center;
      Vec u = v;
      u.axpy(-inner(v, r) / sq(r), r);
      const double lambda = sq(u) / sq(r);
      const double w = std::sqrt(std::abs(lambda));
      if (lambda > 0)
        return *n.center + std::cos(w * t) * r + (std::sin(w * t) / w) * u;
      return *n.center + std::cosh(w * t) * r + (std::sinh(w * t) / w) * u;
    }
  }
}

}  // namespace wpd
