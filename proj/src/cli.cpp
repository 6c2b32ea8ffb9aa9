#include "warpdecomp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "warpdecomp/circles.hpp"
#include "warpdecomp/errors.hpp"

namespace wpd::cli {

using nlohmann::json;

namespace {

constexpr int kSchema = 1;
constexpr const char* kVersion = "1.0.0";

// ---- JSON output: sorted keys, doubles at 17 significant digits.

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool flat(const json& j) {
  return std::all_of(j.begin(), j.end(), [](const json& x) { return !x.is_structured(); });
}

void emit(const json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        emit(it.value(), os, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (flat(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          emit(j[i], os, indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        emit(j[i], os, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float: os << number(j.get<double>()); return;
    default: os << j.dump(); return;
  }
}

std::string render(const json& j) {
  std::ostringstream os;
  emit(j, os, 0);
  os << "\n";
  return os.str();
}

json to_json(const Vec& v) {
  json out = json::array();
  for (double x : v.coords()) out.push_back(x);
  return out;
}

json to_json(const WarpedPoint& p) {
  json out = json::array();
  for (const Vec& c : p.components) out.push_back(to_json(c));
  return out;
}

// ---- seed parsing

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path.empty() ? "$" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      fail(path + "." + it.key(), "unknown field");
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing field");
  return j.at(key);
}

double real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Vec vec_of(const Space& s, const std::vector<double>& xs, const std::string& what) {
  if (static_cast<int>(xs.size()) != s.dim())
    throw DimensionMismatch(what + ": expected " + std::to_string(s.dim()) + " coordinates, got " +
                            std::to_string(xs.size()));
  return Vec(s, xs);
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": malformed JSON: " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot write file");
  f << text;
}

std::vector<std::vector<double>> nested(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(numbers(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// ---- summaries

json summary(const WarpedDecomposition& w) {
  json s;
  s["space"] = {{"dim", w.space.dim()}, {"index", w.space.index()}};
  s["case_tag"] = to_string(w.tag);
  s["canonical"] = w.canonical;
  s["connected"] = w.connected;
  s["base_point"] = to_json(w.base);
  s["canonical_offset"] = to_json(canonical_offset(w));
  s["geodesic"] = {{"dim", w.geodesic.dim()}, {"index", w.geodesic.index()}};
  json factors = json::array();
  json kinds = json::array();
  for (int i = 1; i <= w.k(); ++i) {
    const Factor& f = w.factor(i);
    json fj;
    fj["index"] = i;
    fj["kind"] = to_string(f.sphere.kind);
    fj["dim"] = f.sphere.dim;
    fj["signature_index"] = f.sphere.index;
    fj["kappa"] = f.kappa;
    fj["center"] = f.sphere.center ? to_json(*f.sphere.center) : json(nullptr);
    fj["a"] = to_json(f.a);
    fj["stage"] = f.stage;
    fj["disconnected"] = f.sphere.disconnected;
    factors.push_back(fj);
    kinds.push_back(to_string(f.sphere.kind));
  }
  s["factors"] = factors;
  s["factor_kinds"] = kinds;
  json image = json::array();
  for (const Stage& st : w.stages) {
    json cond = json::array();
    if (st.tag == CaseTag::kNull) {
      cond.push_back("<a, q - c> > 0");
    } else {
      for (int i : st.factors) {
        cond.push_back("sgn (P_" + std::to_string(i) + "(q - c))^2 = eps_" + std::to_string(i));
        if (w.connected && w.factor(i).sphere.disconnected)
          cond.push_back("<a_" + std::to_string(i) + ", P_" + std::to_string(i) + "(q - c)> > 0");
      }
    }
    image.push_back({{"case_tag", to_string(st.tag)}, {"center", to_json(st.center)}, {"conditions", cond}});
  }
  s["image"] = image;
  if (w.restriction) {
    s["restriction"] = {{"kappa", w.restriction->kappa},
                        {"cut", w.restriction->cut},
                        {"ambient_cut", w.restriction->ambient_cut.has_value()}};
  }
  const TypeTag t = enumerate_type(w);
  s["type"] = {{"family", t.family}, {"descriptor", t.descriptor}};
  return s;
}

// ---- validation

struct Check {
  std::string name;
  int samples = 0;
  double max_error = 0.0;
  double tolerance;

  void add(double e) {
    ++samples;
    max_error = std::max(max_error, std::isfinite(e) ? e : INFINITY);
  }
  bool pass() const { return samples > 0 && max_error <= tolerance; }
};

double component_diff(const WarpedPoint& x, const WarpedPoint& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.components.size(); ++i) d = std::max(d, max_abs(x.components[i] - y.components[i]));
  return d;
}

json validate(const WarpedDecomposition& w, int samples, std::uint64_t seed, double tol) {
  std::vector<Check> checks{{"warped_metric", 0, 0.0, tol},
                            {"pushforward_fd", 0, 0.0, 1e-6},
                            {"expanded_form", 0, 0.0, 1e-10},
                            {"round_trip_inverse", 0, 0.0, 1e-9},
                            {"round_trip_forward", 0, 0.0, 1e-9}};
  Check norm{"norm_identity", 0, 0.0, 1e-10};
  Check quadric{"quadric_residency", 0, 0.0, 1e-10};
  Sampler sampler(w, seed);
  for (int s = 0; s < samples; ++s) {
    const WarpedPoint p = sampler.point();
    const std::vector<Vec> v = sampler.tangent(p);
    const Vec q = psi_forward(w, p);
    const double sc = 1.0 + max_abs(q);
    double vs = 1.0;
    for (const Vec& x : v) vs += euclidean_dot(x, x);
    const Vec pv = psi_pushforward(w, p, v);
    checks[0].add(std::abs(sq(pv) - warped_norm(w, p, v)) / vs);
    checks[1].add(max_abs(psi_pushforward_numeric(w, p, v) - pv) / vs);
    checks[2].add(max_abs(psi_expanded(w, p) - q) / sc);
    const WarpedPoint back = psi_inverse(w, q);
    checks[3].add(component_diff(back, p) / sc);
    checks[4].add(max_abs(psi_forward(w, back) - q) / sc);
    if (w.canonical) {
      const double p0sq = sq(p.components[0]);
      norm.add(std::abs(sq(q) - p0sq) / ((1.0 + std::abs(p0sq)) * sc * sc));
    }
    if (w.restriction) quadric.add(std::abs(sq(q) - 1.0 / w.restriction->kappa) / (sc * sc));
  }
  if (w.canonical) checks.push_back(norm);
  if (w.restriction) checks.push_back(quadric);

  Check geo{"factor_geodesics", 0, 0.0, 1e-5};
  for (int i = 1; i <= w.k(); ++i) {
    const SphericalSubmanifold& n = w.factor(i).sphere;
    if (n.kind == SphereKind::kPlane) continue;
    for (const Vec& e : n.tangent.pseudo_orthonormal_basis()) {
      const CircleReport r = sphere_geodesic_is_circle(n, n.base, e);
      geo.add(r.max_residual);
    }
  }
  if (geo.samples > 0) checks.push_back(geo);

  json report;
  report["schema"] = kSchema;
  report["version"] = kVersion;
  report["seed"] = seed;
  report["samples"] = samples;
  report["summary"] = summary(w);
  bool all = true;
  json list = json::array();
  for (const Check& c : checks) {
    list.push_back({{"name", c.name},
                    {"samples", c.samples},
                    {"max_error", c.max_error},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass()}});
    all = all && c.pass();
  }
  if (w.restriction) {
    const ProductCheck pc = check_no_product_decomposition(w, samples, seed);
    list.push_back({{"name", "no_product_decomposition"},
                    {"samples", pc.samples},
                    {"min_gradient", pc.min_gradient},
                    {"pass", pc.holds}});
    all = all && pc.holds;
  }
  report["checks"] = list;
  report["pass"] = all;
  return report;
}

Space parse_space(const std::string& text) {
  int n = 0, nu = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> n >> comma >> nu) || comma != ',' || !(in >> std::ws).eof())
    throw ParseError("--space: expected 'n,nu', got '" + text + "'");
  if (n < 1 || nu < 0 || nu > n) throw InvalidInput("--space: need 1 <= n and 0 <= nu <= n");
  return Space(n, nu);
}

Vec parse_vec(const Space& s, const std::string& text, const std::string& flag) {
  return vec_of(s, numbers(parse_json(text, flag), flag), flag);
}

}  // namespace

SeedDocument parse_seed(std::string_view text) {
  const json j = parse_json(text, "seed");
  only_keys(j, "$", {"schema", "space", "kappa", "base_point", "factors", "a_vectors", "b_vector", "flags"});
  const json& schema = need(j, "$", "schema");
  if (integer(schema, "$.schema") != kSchema) fail("$.schema", "unsupported schema version");

  const json& sp = need(j, "$", "space");
  only_keys(sp, "$.space", {"dim", "index"});
  const int n = integer(need(sp, "$.space", "dim"), "$.space.dim");
  const int nu = integer(need(sp, "$.space", "index"), "$.space.index");
  if (n < 1 || nu < 0 || nu > n) throw InvalidInput("$.space: need dim >= 1 and 0 <= index <= dim");
  const Space s(n, nu);

  SeedDocument doc;
  InitialData& d = doc.data;
  if (j.contains("kappa")) d.kappa = real(j.at("kappa"), "$.kappa");
  d.base = vec_of(s, numbers(need(j, "$", "base_point"), "$.base_point"), "$.base_point");

  const json& fs = need(j, "$", "factors");
  if (!fs.is_array()) fail("$.factors", "expected an array");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string path = "$.factors[" + std::to_string(i) + "]";
    only_keys(fs[i], path, {"basis"});
    const auto rows = nested(need(fs[i], path, "basis"), path + ".basis");
    std::vector<Vec> basis;
    for (std::size_t r = 0; r < rows.size(); ++r)
      basis.push_back(vec_of(s, rows[r], path + ".basis[" + std::to_string(r) + "]"));
    if (basis.empty()) throw InvalidInitialData(path + ": empty basis");
    d.factors.push_back(Subspace::span(s, std::move(basis)));
  }
  const auto as = nested(need(j, "$", "a_vectors"), "$.a_vectors");
  for (std::size_t i = 0; i < as.size(); ++i)
    d.a.push_back(vec_of(s, as[i], "$.a_vectors[" + std::to_string(i) + "]"));
  if (j.contains("b_vector")) d.b = vec_of(s, numbers(j.at("b_vector"), "$.b_vector"), "$.b_vector");

  if (j.contains("flags")) {
    const json& fl = j.at("flags");
    only_keys(fl, "$.flags", {"canonical", "connected"});
    auto flag = [&](const char* key) {
      if (!fl.contains(key)) return false;
      if (!fl.at(key).is_boolean()) fail(std::string("$.flags.") + key, "expected a boolean");
      return fl.at(key).get<bool>();
    };
    doc.require_canonical = flag("canonical");
    d.connected = flag("connected");
  }
  return doc;
}

WarpedDecomposition build_seed(const SeedDocument& doc) {
  if (doc.data.factors.empty()) throw InvalidInitialData("factors: at least V_0 is required");
  WarpedDecomposition w = build(doc.data);
  if (doc.require_canonical && !w.canonical)
    throw InvalidInitialData("flags.canonical is set but the decomposition is not canonical");
  return w;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Warped-product decompositions of pseudo-Euclidean space", "warpdecomp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string input, report, point, ambient, space_text, p_text, x_text, y_text;
  int samples = 200;
  std::uint64_t seed = 1;
  double tol = 1e-8, t_max = 2 * std::numbers::pi, dt = 0.1, step = 1e-3;
  bool closed = false, integrate = false, both = false, csv = false;

  auto* build_cmd = app.add_subcommand("build", "Classify factors and describe the image");
  build_cmd->add_option("--input", input, "Seed JSON")->required();
  build_cmd->add_option("--report", report, "Write the summary here instead of stdout");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate psi at a tuple of factor points");
  eval_cmd->add_option("--input", input, "Seed JSON")->required();
  eval_cmd->add_option("--point", point, "JSON array [p_0, ..., p_k]")->required();

  auto* invert_cmd = app.add_subcommand("invert", "Invert psi at an ambient point");
  invert_cmd->add_option("--input", input, "Seed JSON")->required();
  invert_cmd->add_option("--ambient-point", ambient, "JSON array")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Run the invariant suite on a seed");
  validate_cmd->add_option("--input", input, "Seed JSON")->required();
  validate_cmd->add_option("--samples", samples, "Sampled points")->check(CLI::PositiveNumber);
  validate_cmd->add_option("--seed", seed, "Sampler seed");
  validate_cmd->add_option("--tol", tol, "Tolerance of the warped-metric check")->check(CLI::PositiveNumber);
  validate_cmd->add_option("--report", report, "Write the report here instead of stdout");

  auto* circle_cmd = app.add_subcommand("circle", "Sample a circle of flat space");
  circle_cmd->add_option("--space", space_text, "n,nu")->required();
  circle_cmd->add_option("--p", p_text, "JSON array")->required();
  circle_cmd->add_option("--X", x_text, "JSON array, unit velocity")->required();
  circle_cmd->add_option("--Y", y_text, "JSON array, acceleration orthogonal to X")->required();
  circle_cmd->add_option("--t-max", t_max, "End of the sampled interval");
  circle_cmd->add_option("--dt", dt, "Sample spacing")->check(CLI::PositiveNumber);
  circle_cmd->add_option("--step", step, "RK4 step")->check(CLI::PositiveNumber);
  auto* f1 = circle_cmd->add_flag("--closed-form", closed, "Closed form only");
  auto* f2 = circle_cmd->add_flag("--integrate", integrate, "RK4 only");
  auto* f3 = circle_cmd->add_flag("--both", both, "Both, with the pointwise deviation (default)");
  f1->excludes(f2)->excludes(f3);
  f2->excludes(f3);
  circle_cmd->add_flag("--csv", csv, "CSV instead of JSON");

  auto* enum_cmd = app.add_subcommand("enumerate", "Type tag of the decomposition");
  enum_cmd->add_option("--input", input, "Seed JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (*circle_cmd) {
      const Space s = parse_space(space_text);
      const CircleState st{parse_vec(s, p_text, "--p"), parse_vec(s, x_text, "--X"), parse_vec(s, y_text, "--Y")};
      const CircleClass cls = classify_circle(st);
      if (!closed && !integrate) both = true;
      const int n = static_cast<int>(std::floor(std::abs(t_max) / dt + 1e-9));
      std::vector<double> grid;
      for (int i = 0; i <= n; ++i) grid.push_back((t_max < 0 ? -dt : dt) * i);
      std::vector<CircleSample> rk;
      if (!closed) rk = circle_integrate(st, grid, step);
      json rows = json::array();
      std::ostringstream table;
      if (csv) {
        table << "t";
        for (int i = 0; i < s.dim(); ++i) table << ",p" << i;
        table << ",xx,yy,xy" << (both ? ",deviation" : "") << "\n";
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const CircleSample smp = closed ? circle_exact_state(st, grid[i]) : rk[i];
        const double dev = both ? max_abs(smp.p - circle_exact(st, grid[i])) : 0.0;
        if (csv) {
          table << number(smp.t);
          for (double x : smp.p.coords()) table << "," << number(x);
          table << "," << number(smp.xx) << "," << number(smp.yy) << "," << number(smp.xy);
          if (both) table << "," << number(dev);
          table << "\n";
          continue;
        }
        json row{{"t", smp.t}, {"p", to_json(smp.p)}, {"X", to_json(smp.X)}, {"Y", to_json(smp.Y)},
                 {"xx", smp.xx}, {"yy", smp.yy}, {"xy", smp.xy}};
        if (both) row["deviation"] = dev;
        rows.push_back(row);
      }
      if (csv) {
        out << table.str();
      } else {
        json doc{{"schema", kSchema},
                 {"class", to_string(cls)},
                 {"curvature", circle_curvature(st)},
                 {"mode", closed ? "closed-form" : (integrate ? "integrate" : "both")},
                 {"samples", rows}};
        out << render(doc);
      }
      return kExitOk;
    }

    const SeedDocument doc = parse_seed(read_file(input));
    const WarpedDecomposition w = build_seed(doc);

    if (*build_cmd) {
      json s = summary(w);
      s["schema"] = kSchema;
      write_output(render(s), report, out);
      return kExitOk;
    }
    if (*enum_cmd) {
      const TypeTag t = enumerate_type(w);
      out << render(json{{"family", t.family}, {"descriptor", t.descriptor}});
      return kExitOk;
    }
    if (*eval_cmd) {
      const auto comps = nested(parse_json(point, "--point"), "--point");
      WarpedPoint p;
      for (std::size_t i = 0; i < comps.size(); ++i)
        p.components.push_back(vec_of(w.space, comps[i], "--point[" + std::to_string(i) + "]"));
      if (static_cast<int>(p.components.size()) != w.k() + 1)
        throw OutOfDomain("--point: expected " + std::to_string(w.k() + 1) + " components");
      out << render(to_json(psi_forward(w, p)));
      return kExitOk;
    }
    if (*invert_cmd) {
      const Vec q = parse_vec(w.space, ambient, "--ambient-point");
      out << render(to_json(psi_inverse(w, q)));
      return kExitOk;
    }
    if (*validate_cmd) {
      const json r = validate(w, samples, seed, tol);
      write_output(render(r), report, out);
      if (!r.at("pass").get<bool>()) {
        err << "validation failed\n";
        return kExitInvalid;
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const OutOfImage& e) {
    err << "error: " << e.what() << " [" << e.predicate() << "]\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace wpd::cli
