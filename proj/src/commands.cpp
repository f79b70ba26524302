#include "tla/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "tla/errors.hpp"
#include "tla/groupoid.hpp"
#include "tla/holonomy.hpp"
#include "tla/integrator.hpp"
#include "tla/lattice.hpp"

namespace tla {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::Config, where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw Error(ErrorCode::Config, "unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::Config, "key '" + key + "' in " + where + " has the wrong type");
  }
}

template <class T>
T require(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorCode::Config, "missing key '" + key + "' in " + where);
  return get_or<T>(j, key, T{}, where);
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

LieAlgebra algebra_from_json(const json& j) {
  auto preset = [](const std::string& name) {
    try {
      return LieAlgebra::preset(name);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, e.what());
    }
  };
  if (j.is_string()) return preset(j.get<std::string>());
  if (j.is_object() && j.contains("preset")) {
    check_keys(j, {"preset"}, "algebra");
    return preset(require<std::string>(j, "preset", "algebra"));
  }
  check_keys(j, {"dim", "c", "label"}, "algebra");
  int dim = require<int>(j, "dim", "algebra");
  // c is either flat, indexed (k * dim + i) * dim + j, or nested as c[k][i][j].
  std::vector<double> c;
  const json& cj = j.contains("c") ? j.at("c") : json();
  if (cj.is_array() && !cj.empty() && cj.front().is_array()) {
    for (const auto& plane : require<std::vector<std::vector<std::vector<double>>>>(j, "c", "algebra"))
      for (const auto& row : plane) c.insert(c.end(), row.begin(), row.end());
  } else {
    c = require<std::vector<double>>(j, "c", "algebra");
  }
  try {
    return LieAlgebra(dim, std::move(c), get_or<std::string>(j, "label", "custom", "algebra"));
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("invalid algebra: ") + e.what());
  }
}

Backend backend_from_json(const json& j, const std::string& where) {
  if (!j.is_string()) throw Error(ErrorCode::Config, "backend in " + where + " must be a string");
  try {
    return Backend::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
}

SquarePresentation preset_from_json(const json& j) {
  const std::string where = "presentation";
  check_keys(j, {"preset", "lam", "flat_margin", "backend", "xi", "samples"}, where);
  const std::string name = require<std::string>(j, "preset", where);
  const double margin = get_or<double>(j, "flat_margin", 0.1, where);
  auto need_backend = [&]() { return backend_from_json(j.contains("backend") ? j.at("backend") : json("su2"), where); };
  auto xi = [&](const Backend& b) {
    Vec v = to_vec(require<std::vector<double>>(j, "xi", where));
    if (v.size() != b.algebra_dim()) throw Error(ErrorCode::Config, "xi has the wrong dimension for " + b.name());
    return v;
  };
  if (name == "trivial") return preset_trivial(need_backend(), margin);
  if (name == "abelian-bump") return preset_abelian_bump(get_or<double>(j, "lam", 1.0, where), margin);
  if (name == "su2-clutch") return preset_su2_clutch(margin);
  if (name == "sl2-clutch") return preset_sl2_clutch(margin);
  if (name == "euclid-clutch") return preset_euclid_clutch(margin);
  if (name == "r+su2-twist") return preset_rsu2_twist(margin);
  if (name == "exp-clutch") {
    Backend b = need_backend();
    return preset_exp_clutch(b, xi(b), margin);
  }
  if (name == "sampled-clutch") {
    Backend b = need_backend();
    return clutch_to_square(sampled_exp_clutch(b, xi(b), get_or<int>(j, "samples", 401, where), margin));
  }
  throw Error(ErrorCode::Config, "unknown preset '" + name + "'");
}

}  // namespace

SquarePresentation presentation_from_json(const json& j) {
  const std::string where = "presentation";
  if (!j.is_object()) throw Error(ErrorCode::Config, "presentation must be a JSON object");
  if (j.contains("preset")) return preset_from_json(j);
  if (j.contains("connect_sum")) {
    check_keys(j, {"connect_sum"}, where);
    const json& parts = j.at("connect_sum");
    if (!parts.is_array() || parts.size() != 2)
      throw Error(ErrorCode::Config, "connect_sum needs exactly two presentations");
    return connect_sum(presentation_from_json(parts[0]), presentation_from_json(parts[1]));
  }
  if (j.contains("gauge")) {
    check_keys(j, {"gauge", "base"}, where);
    SquarePresentation base = presentation_from_json(require<json>(j, "base", where));
    const json& g = j.at("gauge");
    check_keys(g, {"psi", "mu", "support_margin"}, "gauge");
    const int n = base.algebra().dim();
    Mat psi = Mat::Identity(n, n);
    if (g.contains("psi")) {
      auto rows = get_or<std::vector<std::vector<double>>>(g, "psi", {}, "gauge");
      if (static_cast<int>(rows.size()) != n) throw Error(ErrorCode::Config, "psi has the wrong shape");
      for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[r].size()) != n) throw Error(ErrorCode::Config, "psi has the wrong shape");
        for (int c = 0; c < n; ++c) psi(r, c) = rows[r][c];
      }
    }
    auto mu = get_or<std::vector<std::string>>(g, "mu", std::vector<std::string>(n, "0"), "gauge");
    if (static_cast<int>(mu.size()) != n) throw Error(ErrorCode::Config, "mu has the wrong dimension");
    return apply_gauge(base, GaugeTransformation::from_exprs(psi, mu, get_or<double>(g, "support_margin", 0.1, "gauge")));
  }
  check_keys(j, {"algebra", "backend", "theta_s", "theta_t", "lam", "flat_margin", "grid", "label"}, where);
  LieAlgebra alg = algebra_from_json(require<json>(j, "algebra", where));
  std::optional<Backend> backend;
  if (j.contains("backend")) backend = backend_from_json(j.at("backend"), where);
  FramingOptions f;
  f.flat_margin = get_or<double>(j, "flat_margin", 0.1, where);
  f.grid = get_or<int>(j, "grid", 101, where);
  return SquarePresentation::from_exprs(alg, backend, require<std::vector<std::string>>(j, "theta_s", where),
                                        require<std::vector<std::string>>(j, "theta_t", where),
                                        get_or<double>(j, "lam", 0.0, where), f,
                                        get_or<std::string>(j, "label", "custom", where));
}

namespace {

const std::set<std::string> kTopKeys = {"command",  "presentation", "numerics",  "seed",     "monodromy",
                                        "family",   "transport",    "integrate", "selftest", "output"};
const std::set<std::string> kNumericKeys = {"steps",         "path_samples",     "central_tol",
                                            "scheme",        "lattice_tol",      "threshold",
                                            "eq_tol",        "refine_levels",    "discreteness_eps",
                                            "discreteness_cap"};

struct Numerics {
  ClassifyOptions classify;
  double lattice_tol = 1e-8;
  double threshold = 1e-3;
  double eq_tol = 1e-6;
  int refine_levels = 16;
  DiscretenessOptions discreteness;
  std::uint64_t seed = 1;
};

Numerics numerics_from(const json& config, const CommandOverrides& ov) {
  Numerics n;
  json j = config.value("numerics", json::object());
  check_keys(j, kNumericKeys, "numerics");
  n.classify.sweep_steps = get_or<int>(j, "steps", n.classify.sweep_steps, "numerics");
  n.classify.path_samples = get_or<int>(j, "path_samples", n.classify.path_samples, "numerics");
  n.classify.central_tol = get_or<double>(j, "central_tol", n.classify.central_tol, "numerics");
  std::string scheme = get_or<std::string>(j, "scheme", "gauss", "numerics");
  if (scheme == "gauss") {
    n.classify.scheme = TransportScheme::GaussMagnus4;
  } else if (scheme == "midpoint") {
    n.classify.scheme = TransportScheme::Midpoint;
  } else {
    throw Error(ErrorCode::Config, "scheme must be 'gauss' or 'midpoint'");
  }
  n.lattice_tol = get_or<double>(j, "lattice_tol", n.lattice_tol, "numerics");
  n.threshold = get_or<double>(j, "threshold", n.threshold, "numerics");
  n.eq_tol = get_or<double>(j, "eq_tol", n.eq_tol, "numerics");
  n.refine_levels = get_or<int>(j, "refine_levels", n.refine_levels, "numerics");
  n.discreteness.epsilon = get_or<double>(j, "discreteness_eps", n.discreteness.epsilon, "numerics");
  n.discreteness.max_iterations = get_or<int>(j, "discreteness_cap", n.discreteness.max_iterations, "numerics");
  if (!(n.discreteness.epsilon > 0.0) || n.discreteness.max_iterations < 1)
    throw Error(ErrorCode::Config, "discreteness_eps must be positive and discreteness_cap at least 1");
  n.seed = get_or<std::uint64_t>(config, "seed", n.seed, "config");
  if (ov.steps) n.classify.sweep_steps = *ov.steps;
  if (ov.tol) {
    n.classify.central_tol = *ov.tol;
    n.eq_tol = *ov.tol;
  }
  if (ov.seed) n.seed = *ov.seed;
  if (n.classify.sweep_steps < 2) throw Error(ErrorCode::Config, "steps must be at least 2");
  if (n.classify.path_samples < 2) throw Error(ErrorCode::Config, "path_samples must be at least 2");
  if (!(n.classify.central_tol > 0.0) || !(n.eq_tol > 0.0) || !(n.lattice_tol > 0.0))
    throw Error(ErrorCode::Config, "tolerances must be positive");
  return n;
}

SquarePresentation need_presentation(const json& config) {
  if (!config.contains("presentation")) throw Error(ErrorCode::Config, "missing key 'presentation'");
  return presentation_from_json(config.at("presentation"));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CommandOutput cmd_classify(const json& config, const Numerics& n) {
  SquarePresentation p = need_presentation(config);
  ClassifyResult r = classify_c(p, n.classify);
  if (config.contains("output") && get_or<bool>(config.at("output"), "trace", false, "output"))
    return {r.trace.to_csv(), "csv"};
  json out;
  out["command"] = "classify";
  out["presentation"] = p.label();
  out["backend"] = p.group().name();
  out["c"] = vec_json(r.c.coords());
  out["c_formatted"] = format_element(r.c);
  out["central"] = true;
  out["central_defect"] = r.central_defect;
  if (auto k = central_index(r.c, n.classify.central_tol)) out["central_index"] = *k;
  out["steps"] = n.classify.sweep_steps;
  return {dump(out)};
}

json lattice_json(const CentralLattice& lat, const Numerics& n) {
  Discreteness d = lattice_discreteness(lat, n.discreteness);
  json out;
  out["backend"] = lat.backend().name();
  json gens = json::array();
  for (const auto& g : lat.generators()) gens.push_back(vec_json(g.coords()));
  out["generators"] = gens;
  json red = json::array();
  for (const auto& g : d.reduced) red.push_back(vec_json(g.coords()));
  out["reduced"] = red;
  out["verdict"] = d.discrete && d.min_generator_norm > n.threshold ? "discrete" : "non-discrete";
  out["min_gap"] = num_json(d.min_generator_norm);
  return out;
}

CommandOutput cmd_monodromy(const json& config, const Numerics& n, const CommandOverrides& ov) {
  if (ov.family || config.contains("family")) {
    if (!config.contains("family")) throw Error(ErrorCode::Config, "--family needs a 'family' section");
    const json& f = config.at("family");
    check_keys(f, {"presentation", "lam", "samples"}, "family");
    json spec = require<json>(f, "presentation", "family");
    auto range = require<std::vector<double>>(f, "lam", "family");
    int samples = get_or<int>(f, "samples", 21, "family");
    if (range.size() != 2 || !(range[0] <= range[1]) || samples < 1)
      throw Error(ErrorCode::Config, "family needs lam = [min, max] and samples >= 1");
    std::vector<double> lams;
    for (int i = 0; i < samples; ++i)
      lams.push_back(samples == 1 ? range[0] : range[0] + (range[1] - range[0]) * i / (samples - 1));
    ScanOptions so;
    so.threshold = n.threshold;
    so.refine_levels = n.refine_levels;
    so.classify = n.classify;
    so.lattice_tolerance = n.lattice_tol;
    so.discreteness = n.discreteness;
    auto family = [&](double lam) {
      json s = spec;
      s["lam"] = lam;
      return presentation_from_json(s);
    };
    ScanResult r = local_uniform_check(family, lams, so);
    json out = json::parse(r.to_json());
    out["command"] = "monodromy";
    out["mode"] = "family";
    return {dump(out), "json", true};
  }
  json out;
  if (config.contains("monodromy")) {
    const json& m = config.at("monodromy");
    check_keys(m, {"backend", "generators", "presentations"}, "monodromy");
    if (m.contains("generators")) {
      Backend b = backend_from_json(require<json>(m, "backend", "monodromy"), "monodromy");
      std::vector<GroupElement> gens;
      for (const auto& g : get_or<std::vector<std::vector<double>>>(m, "generators", {}, "monodromy")) {
        try {
          gens.emplace_back(b, to_vec(g));
        } catch (const Error& e) {
          throw Error(ErrorCode::Config, std::string("invalid generator: ") + e.what());
        }
      }
      out = lattice_json(CentralLattice(b, gens, n.lattice_tol), n);
    } else {
      std::vector<SquarePresentation> ps;
      for (const auto& s : require<json>(m, "presentations", "monodromy")) ps.push_back(presentation_from_json(s));
      if (ps.empty()) throw Error(ErrorCode::Config, "monodromy needs at least one presentation");
      out = lattice_json(monodromy_generators(ps, n.classify, n.lattice_tol), n);
    }
  } else {
    out = lattice_json(monodromy_generators({need_presentation(config)}, n.classify, n.lattice_tol), n);
  }
  out["command"] = "monodromy";
  out["mode"] = "generators";
  return {dump(out)};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CommandOutput cmd_transport(const json& config, const Numerics& n) {
  SquarePresentation p = need_presentation(config);
  json t = config.value("transport", json::object());
  check_keys(t, {"path", "samples_per_edge", "start"}, "transport");
  std::vector<Point> vertices;
  for (const auto& v : require<std::vector<std::vector<double>>>(t, "path", "transport")) {
    if (v.size() != 2) throw Error(ErrorCode::Config, "path vertices must be [s, t] pairs");
    vertices.emplace_back(v[0], v[1]);
  }
  int per_edge = get_or<int>(t, "samples_per_edge", 100, "transport");
  SampledPath path = vertices.size() == 1 ? SampledPath::constant(vertices[0], per_edge)
                                          : SampledPath::polyline(vertices, per_edge);
  GroupElement g0 = group_identity(p.group());
  if (t.contains("start")) g0 = GroupElement(p.group(), to_vec(get_or<std::vector<double>>(t, "start", {}, "transport")));
  std::vector<GroupElement> trace = transport_trace(p, path, g0, n.classify.scheme);
  std::ostringstream os;
  os << "index,s,t";
  for (int i = 0; i < p.group().coord_dim(); ++i) os << ",g" << i;
  os << "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << i << "," << fmt(path.points()[i].x()) << "," << fmt(path.points()[i].y());
    for (Eigen::Index k = 0; k < trace[i].coords().size(); ++k) os << "," << fmt(trace[i].coords()(k));
    os << "\n";
  }
  return {os.str(), "csv", true};
}

Point random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.05, 0.95);
  double x = d(rng);
  return Point(x, d(rng));
}

SampledPath random_path(std::mt19937_64& rng, const Point& a, const Point& b) {
  return SampledPath::polyline({a, random_point(rng), b}, 100);
}

GroupElement random_element(std::mt19937_64& rng, const Backend& b) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec xi(b.algebra_dim());
  for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = d(rng);
  return group_exp(b, xi);
}

CommandOutput cmd_integrate(const json& config, const Numerics& n) {
  SquarePresentation p = need_presentation(config);
  json ic = config.value("integrate", json::object());
  check_keys(ic, {"arrows", "loops", "point_pairs"}, "integrate");
  const int arrows = get_or<int>(ic, "arrows", 20, "integrate");
  const int loops = get_or<int>(ic, "loops", 4, "integrate");
  const int pairs = get_or<int>(ic, "point_pairs", 4, "integrate");
  if (arrows < 1 || loops < 1 || pairs < 1) throw Error(ErrorCode::Config, "integrate counts must be positive");
  auto lat = std::make_shared<const CentralLattice>(monodromy_generators({p}, n.classify, n.lattice_tol));
  std::mt19937_64 rng(n.seed);
  IntegratorOptions io;
  io.eq_tol = n.eq_tol;
  io.scheme = n.classify.scheme;
  LawReport laws = check_laws(p, lat, arrows, rng, io);

  std::vector<std::pair<Point, Point>> pts;
  std::uniform_real_distribution<double> inner(0.25, 0.75);
  for (int i = 0; i < pairs; ++i) {
    double a = inner(rng), b = inner(rng), c = inner(rng), d = inner(rng);
    pts.emplace_back(Point(a, b), Point(c, d));
  }
  CocycleReport coc = cocycle_check(p, *lat, default_charts(), pts, 1e-3, io);

  Point m = random_point(rng);
  std::vector<SampledPath> ls{SampledPath::constant(m)};
  for (int i = 1; i < loops; ++i) ls.push_back(SampledPath::polyline({m, random_point(rng), random_point(rng), m}, 100));
  IsotropySample iso = isotropy_sample(p, *lat, m, ls, io);

  json out;
  out["command"] = "integrate";
  out["presentation"] = p.label();
  out["lattice"] = lattice_json(*lat, n);
  out["triples"] = laws.triples;
  out["unit_defect"] = laws.unit;
  out["inverse_defect"] = laws.inverse;
  out["double_inverse_defect"] = laws.double_inverse;
  out["associativity_defect"] = laws.associativity;
  out["cocycle_defect"] = coc.max_defect;
  out["cocycle_triples"] = coc.triples;
  out["transition_slope"] = coc.max_slope;
  json elems = json::array();
  for (const auto& e : iso.elements) elems.push_back(vec_json(e.coords()));
  out["isotropy"] = {{"basepoint", {m.x(), m.y()}}, {"elements", elems}, {"table_defect", iso.table_defect}};
  bool pass = std::max({laws.unit, laws.inverse, laws.double_inverse, laws.associativity, coc.max_defect,
                        iso.table_defect}) <= n.eq_tol;
  out["pass"] = pass;
  return {dump(out), "json", pass};
}

// ---------------------------------------------------------------------------
// Selftest.

struct Check {
  std::string suite;
  std::string name;
  bool pass = false;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

struct Selftest {
  std::set<std::string> suites;
  std::vector<Check> checks;
  std::mt19937_64 rng;

  bool wants(const std::string& s) const { return suites.empty() || suites.count(s); }

  void run(const std::string& suite, const std::string& name, const std::function<Check()>& f) {
    Check c;
    try {
      c = f();
    } catch (const Error& e) {
      c.pass = false;
      c.detail = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    c.suite = suite;
    c.name = name;
    checks.push_back(c);
  }
};

std::vector<int> source_list(const FiniteGroupoid& g) {
  std::vector<int> v;
  for (int a = 0; a < g.arrows(); ++a) v.push_back(g.source(a));
  return v;
}

std::vector<int> target_list(const FiniteGroupoid& g) {
  std::vector<int> v;
  for (int a = 0; a < g.arrows(); ++a) v.push_back(g.target(a));
  return v;
}

Check le(double value, double bound) {
  Check c;
  c.value = value;
  c.pass = value <= bound;
  char buf[32];
  std::snprintf(buf, sizeof buf, "bound %g", bound);
  c.detail = buf;
  return c;
}

void suite_lie_core(Selftest& st) {
  st.run("lie-core", "jacobi identity of presets", [] {
    double worst = 0.0;
    for (const char* name : {"su2", "sl2", "euclidean", "douady:2", "r+su2", "abelian:3"})
      worst = std::max(worst, jacobi_defect(LieAlgebra::preset(name)));
    return le(worst, 1e-12);
  });
  st.run("lie-core", "group axioms on random triples", [&st] {
    double worst = 0.0;
    for (const char* name : {"abelian:2", "su2", "sl2-cover", "euclidean-cover", "douady:0.5", "douady:-2"}) {
      Backend b = Backend::parse(name);
      for (int i = 0; i < 20; ++i) {
        GroupElement g = random_element(st.rng, b), h = random_element(st.rng, b), k = random_element(st.rng, b);
        worst = std::max(worst, group_distance(group_mul(group_mul(g, h), k), group_mul(g, group_mul(h, k))));
        worst = std::max(worst, dist_to_identity(group_mul(g, group_inv(g))));
      }
    }
    return le(worst, 1e-9);
  });
  st.run("lie-core", "adjoint matches exp of ad", [&st] {
    double worst = 0.0;
    for (const char* name : {"su2", "sl2-cover", "euclidean-cover"}) {
      Backend b = Backend::parse(name);
      std::normal_distribution<double> d(0.0, 0.7);
      for (int i = 0; i < 10; ++i) {
        Vec xi(3);
        for (int k = 0; k < 3; ++k) xi(k) = d(st.rng);
        Mat diff = adjoint_matrix(group_exp(b, xi)) - matrix_exp(b.algebra().ad(xi));
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
      }
    }
    return le(worst, 1e-9);
  });
  st.run("lie-core", "Douady period of z is 4 pi", [] {
    double worst = 0.0;
    for (double s : {0.1, 1.0, 4.0}) {
      auto per = one_param_period(Backend::douady(s), Vec::Unit(3, 2));
      worst = std::max(worst, per ? std::abs(*per - 4.0 * M_PI) : 1.0);
    }
    return le(worst, 1e-8);
  });
}

void suite_lattice(Selftest& st) {
  const Backend r1 = Backend::abelian(1);
  auto el = [&](double x) { return GroupElement(r1, Vec::Constant(1, x)); };
  st.run("lattice", "<1, sqrt 2> is not discrete", [&] {
    Check c;
    Discreteness d = lattice_discreteness(CentralLattice(r1, {el(1.0), el(std::sqrt(2.0))}));
    c.pass = !d.discrete;
    c.value = d.min_generator_norm;
    return c;
  });
  st.run("lattice", "verdict stable under permutation and sign flips", [&] {
    Discreteness a = lattice_discreteness(CentralLattice(r1, {el(6.0), el(10.0), el(15.0)}));
    Discreteness b = lattice_discreteness(CentralLattice(r1, {el(-15.0), el(6.0), el(-10.0)}));
    Check c;
    c.value = std::abs(a.min_generator_norm - b.min_generator_norm);
    c.pass = a.discrete == b.discrete && c.value <= 1e-12 && std::abs(a.min_generator_norm - 1.0) <= 1e-12;
    return c;
  });
  st.run("lattice", "membership is monotone", [&] {
    CentralLattice small(r1, {el(2.0)}), big(r1, {el(2.0), el(3.0)});
    Check c;
    c.pass = lattice_membership(small, el(4.0)) && lattice_membership(big, el(4.0)) &&
             !lattice_membership(small, el(1.0)) && lattice_membership(big, el(1.0));
    return c;
  });
}

void suite_field_dsl(Selftest& st) {
  st.run("field-dsl", "printed expressions reparse to the same values", [] {
    double worst = 0.0;
    for (const char* src : {"sin(s) * cos(t) - 2^t^2", "-lam * step((t - 0.3)/0.4) * bump(s)", "exp(-s*s) / (1 + t)",
                            "sqrt(s + 1) - -t"}) {
      FieldExpr e = FieldExpr::parse(src), f = FieldExpr::parse(e.to_string());
      for (double s : {0.1, 0.5, 0.9})
        for (double t : {0.2, 0.7}) worst = std::max(worst, std::abs(e.eval(s, t, 1.3) - f.eval(s, t, 1.3)));
    }
    return le(worst, 0.0);
  });
  st.run("field-dsl", "smooth step endpoints and symmetry", [] {
    double d = std::max({std::abs(smooth_step(0.0)), std::abs(smooth_step(1.0) - 1.0), std::abs(smooth_step(0.5) - 0.5),
                         std::abs(smooth_step(0.3) + smooth_step(0.7) - 1.0)});
    return le(d, 1e-12);
  });
}

void suite_algebroid(Selftest& st) {
  st.run("algebroid", "framing violation is rejected", [] {
    Check c;
    try {
      SquarePresentation::from_exprs(LieAlgebra::su2(), Backend::su2(), {"1", "0", "0"}, {"0", "0", "0"}, 0.0);
    } catch (const Error& e) {
      c.pass = e.code() == ErrorCode::Presentation;
    }
    return c;
  });
  st.run("algebroid", "gauge transformation preserves c", [] {
    SquarePresentation p = preset_su2_clutch();
    GroupElement g = group_exp(Backend::su2(), Vec::Constant(3, 0.7));
    GaugeTransformation gt = GaugeTransformation::from_exprs(
        adjoint_matrix(g), {"0.8*bump((s-0.2)/0.6)*bump((t-0.2)/0.6)", "0", "-0.5*bump((s-0.2)/0.6)*bump((t-0.2)/0.6)"});
    double d = group_distance(classify_c(p).c, classify_c(apply_gauge(p, gt)).c);
    return le(d, 1e-6);
  });
  st.run("algebroid", "center is flat on the R + su(2) fixture", [] {
    return le(center_flatness_defect(preset_rsu2_twist(), 11), 5e-6);
  });
}

void suite_holonomy(Selftest& st) {
  st.run("holonomy", "c(abelian-bump(1)) = 1", [] {
    return le(std::abs(classify_c(preset_abelian_bump(1.0)).c.coords()(0) - 1.0), 1e-6);
  });
  st.run("holonomy", "c(su2-clutch) = -1 and squares to e", [] {
    SquarePresentation p = preset_su2_clutch();
    GroupElement minus_one(Backend::su2(), Vec::Unit(4, 0) * -1.0);
    double d = std::max(group_distance(classify_c(p).c, minus_one),
                        dist_to_identity(classify_c(connect_sum(p, p)).c));
    return le(d, 1e-6);
  });
  st.run("holonomy", "rectangle holonomy equals minus enclosed curvature", [&st] {
    SquarePresentation p = preset_abelian_bump(1.0);
    double worst = 0.0;
    std::uniform_real_distribution<double> d(0.05, 0.95);
    for (int i = 0; i < 3; ++i) {
      double a = d(st.rng), b = d(st.rng), c = d(st.rng), e = d(st.rng);
      Point lo(std::min(a, b), std::min(c, e)), hi(std::max(a, b), std::max(c, e));
      double hol = -transport(p, rectangle_loop(lo, hi), group_identity(p.group())).coords()(0);
      double integral = curvature_integral(p, lo.x(), lo.y(), hi.x(), hi.y())(0);
      worst = std::max(worst, std::abs(hol + integral));
    }
    return le(worst, 1e-6);
  });
  st.run("holonomy", "holonomy is conjugation equivariant", [&st] {
    SquarePresentation p = preset_su2_clutch();
    CentralLattice lat = monodromy_generators({p});
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      Point m = random_point(st.rng), q = random_point(st.rng);
      SampledPath loop = SampledPath::polyline({m, random_point(st.rng), random_point(st.rng), m}, 100);
      worst = std::max(worst, hol_equivariance_check(p, loop, random_path(st.rng, m, q), lat));
    }
    return le(worst, 1e-6);
  });
}

void suite_groupoid(Selftest& st) {
  for (const auto& r : fixture_suite()) {
    st.run("groupoid-alg", "fixture " + r.name, [r] {
      Check c;
      c.pass = r.pass;
      c.detail = r.detail;
      return c;
    });
  }
}

void suite_integrator(Selftest& st) {
  for (const auto& [name, p] : std::vector<std::pair<std::string, SquarePresentation>>{
           {"abelian-bump", preset_abelian_bump(1.0)}, {"su2-clutch", preset_su2_clutch()}}) {
    auto lat = std::make_shared<const CentralLattice>(monodromy_generators({p}));
    st.run("integrator", "groupoid laws on " + name, [&] {
      LawReport r = check_laws(p, lat, 5, st.rng, {});
      return le(std::max({r.unit, r.inverse, r.double_inverse, r.associativity}), 1e-6);
    });
    st.run("integrator", "transition cocycle on " + name, [&] {
      std::vector<std::pair<Point, Point>> pts{{Point(0.4, 0.5), Point(0.6, 0.3)}, {Point(0.3, 0.3), Point(0.7, 0.6)}};
      return le(cocycle_check(p, *lat, default_charts(), pts).max_defect, 1e-6);
    });
  }
  st.run("integrator", "flat degeneration to Pair x Q8", [] {
    return le(flat_degeneration_defect({Point(0.2, 0.2), Point(0.8, 0.3), Point(0.5, 0.7), Point(0.3, 0.9)}), 0.0);
  });
}

CommandOutput cmd_selftest(const json& config, const Numerics& n) {
  json s = config.value("selftest", json::object());
  check_keys(s, {"suites", "groupoids"}, "selftest");
  // User groupoids are validated up front; an axiom failure is a Groupoid error.
  std::vector<FiniteGroupoid> extra;
  if (s.contains("groupoids")) {
    if (!s.at("groupoids").is_array()) throw Error(ErrorCode::Config, "selftest groupoids must be an array");
    for (const auto& g : s.at("groupoids")) extra.push_back(FiniteGroupoid::from_json(g));
  }
  static const std::vector<std::string> kSuites = {"lie-core",  "lattice",      "field-dsl", "algebroid",
                                                   "holonomy", "groupoid-alg", "integrator"};
  Selftest st;
  st.rng.seed(n.seed);
  for (const auto& name : get_or<std::vector<std::string>>(s, "suites", {}, "selftest")) {
    if (std::find(kSuites.begin(), kSuites.end(), name) == kSuites.end())
      throw Error(ErrorCode::Config, "unknown selftest suite '" + name + "'");
    st.suites.insert(name);
  }
  if (st.wants("lie-core")) suite_lie_core(st);
  if (st.wants("lattice")) suite_lattice(st);
  if (st.wants("field-dsl")) suite_field_dsl(st);
  if (st.wants("algebroid")) suite_algebroid(st);
  if (st.wants("holonomy")) suite_holonomy(st);
  if (st.wants("groupoid-alg")) suite_groupoid(st);
  for (std::size_t i = 0; i < extra.size(); ++i) {
    st.run("groupoid-alg", "user groupoid " + std::to_string(i), [&] {
      Check c;
      c.pass = !groupoid_counterexample(extra[i].objects(), source_list(extra[i]), target_list(extra[i]),
                                        extra[i].to_json().at("table").get<std::vector<int>>());
      c.value = extra[i].arrows();
      return c;
    });
  }
  if (st.wants("integrator")) suite_integrator(st);
  json arr = json::array();
  int failed = 0;
  for (const auto& c : st.checks) {
    arr.push_back({{"suite", c.suite}, {"name", c.name}, {"pass", c.pass}, {"value", num_json(c.value)},
                   {"detail", c.detail}});
    failed += c.pass ? 0 : 1;
  }
  json out;
  out["command"] = "selftest";
  out["checks"] = arr;
  out["failed"] = failed;
  out["pass"] = failed == 0;
  return {dump(out), "json", failed == 0};
}

}  // namespace

CommandOutput run_command(const std::string& command, const json& config, const CommandOverrides& ov) {
  check_keys(config, kTopKeys, "config");
  if (config.contains("command") && config.at("command") != command)
    throw Error(ErrorCode::Config, "config is for command '" + config.at("command").dump() + "', not '" + command + "'");
  if (config.contains("output")) check_keys(config.at("output"), {"path", "trace"}, "output");
  Numerics n = numerics_from(config, ov);
  if (ov.family && command != "monodromy") throw Error(ErrorCode::Config, "--family applies to monodromy only");
  if (command == "classify") return cmd_classify(config, n);
  if (command == "monodromy") return cmd_monodromy(config, n, ov);
  if (command == "transport") return cmd_transport(config, n);
  if (command == "integrate") return cmd_integrate(config, n);
  if (command == "selftest") return cmd_selftest(config, n);
  throw Error(ErrorCode::Config, "unknown command '" + command + "'");
}

}  // namespace tla
