#include "tla/tla.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"
#include "tla/commands.hpp"
#include "tla/errors.hpp"
#include "tla/holonomy.hpp"
#include "tla/lattice.hpp"

struct tla_presentation {
  tla::SquarePresentation p;
};

struct tla_element {
  tla::GroupElement g;
};

struct tla_lattice {
  tla::CentralLattice l;
};

namespace {

thread_local std::string g_last_error;

tla_status fail(tla_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes and the thread-local message.
template <class F>
tla_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const tla::Error& e) {
    return fail(static_cast<tla_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TLA_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TLA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TLA_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define TLA_REQUIRE(cond, msg) \
  if (!(cond)) return fail(TLA_ERR_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* tla_version(void) { return "1.0.0"; }

const char* tla_last_error(void) { return g_last_error.c_str(); }

const char* tla_status_name(tla_status status) {
  if (status == TLA_OK) return "ok";
  if (status == TLA_ERR_INTERNAL) return "internal";
  if (status < TLA_OK || status > TLA_ERR_INTERNAL) return "unknown";
  return tla::error_code_name(static_cast<tla::ErrorCode>(static_cast<int>(status)));
}

void tla_string_free(char* s) { std::free(s); }

tla_status tla_presentation_from_json(const char* spec_json, tla_presentation** out) {
  TLA_REQUIRE(spec_json && out, "null argument");
  return guarded([&] {
    auto spec = nlohmann::json::parse(spec_json);
    *out = new tla_presentation{tla::presentation_from_json(spec)};
    return TLA_OK;
  });
}

void tla_presentation_free(tla_presentation* p) { delete p; }

tla_status tla_presentation_connect_sum(const tla_presentation* p1, const tla_presentation* p2,
                                        tla_presentation** out) {
  TLA_REQUIRE(p1 && p2 && out, "null argument");
  return guarded([&] {
    *out = new tla_presentation{tla::connect_sum(p1->p, p2->p)};
    return TLA_OK;
  });
}

tla_status tla_classify(const tla_presentation* p, int steps, double central_tol, tla_element** out) {
  TLA_REQUIRE(p && out, "null argument");
  return guarded([&] {
    tla::ClassifyOptions opts;
    if (steps > 0) opts.sweep_steps = steps;
    if (central_tol > 0.0) opts.central_tol = central_tol;
    *out = new tla_element{tla::classify_c(p->p, opts).c};
    return TLA_OK;
  });
}

tla_status tla_element_create(const char* backend, const double* coords, size_t n, tla_element** out) {
  TLA_REQUIRE(backend && (coords || n == 0) && out, "null argument");
  return guarded([&] {
    tla::Backend b = tla::Backend::parse(backend);
    if (static_cast<int>(n) != b.coord_dim())
      throw tla::Error(tla::ErrorCode::InvalidArgument, "expected " + std::to_string(b.coord_dim()) + " coordinates");
    tla::Vec v = Eigen::Map<const tla::Vec>(coords, static_cast<Eigen::Index>(n));
    *out = new tla_element{tla::GroupElement(b, v)};
    return TLA_OK;
  });
}

void tla_element_free(tla_element* e) { delete e; }

size_t tla_element_dim(const tla_element* e) { return e ? static_cast<size_t>(e->g.coords().size()) : 0; }

tla_status tla_element_coords(const tla_element* e, double* buf, size_t n) {
  TLA_REQUIRE(e && (buf || n == 0), "null argument");
  size_t m = std::min(n, tla_element_dim(e));
  for (size_t i = 0; i < m; ++i) buf[i] = e->g.coords()(static_cast<Eigen::Index>(i));
  g_last_error.clear();
  return TLA_OK;
}

tla_status tla_element_mul(const tla_element* a, const tla_element* b, tla_element** out) {
  TLA_REQUIRE(a && b && out, "null argument");
  return guarded([&] {
    if (a->g.backend() != b->g.backend())
      throw tla::Error(tla::ErrorCode::InvalidArgument, "elements of different backends");
    *out = new tla_element{tla::group_mul(a->g, b->g)};
    return TLA_OK;
  });
}

tla_status tla_element_distance(const tla_element* a, const tla_element* b, double* out) {
  TLA_REQUIRE(a && b && out, "null argument");
  return guarded([&] {
    if (a->g.backend() != b->g.backend())
      throw tla::Error(tla::ErrorCode::InvalidArgument, "elements of different backends");
    *out = tla::group_distance(a->g, b->g);
    return TLA_OK;
  });
}

tla_status tla_element_format(const tla_element* e, char** out) {
  TLA_REQUIRE(e && out, "null argument");
  return guarded([&] {
    *out = dup_string(tla::format_element(e->g));
    return TLA_OK;
  });
}

tla_status tla_lattice_create(const tla_element* const* generators, size_t n, double tolerance, tla_lattice** out) {
  TLA_REQUIRE((generators || n == 0) && out, "null argument");
  TLA_REQUIRE(n > 0, "lattice needs at least one generator to fix the backend");
  return guarded([&] {
    std::vector<tla::GroupElement> gens;
    for (size_t i = 0; i < n; ++i) {
      if (!generators[i]) throw tla::Error(tla::ErrorCode::InvalidArgument, "null generator");
      gens.push_back(generators[i]->g);
    }
    tla::Backend b = gens.front().backend();
    *out = new tla_lattice{tla::CentralLattice(b, gens, tolerance > 0.0 ? tolerance : 1e-12)};
    return TLA_OK;
  });
}

void tla_lattice_free(tla_lattice* l) { delete l; }

tla_status tla_lattice_discreteness(const tla_lattice* l, int* discrete, double* min_gap) {
  TLA_REQUIRE(l && discrete && min_gap, "null argument");
  return guarded([&] {
    tla::Discreteness d = tla::lattice_discreteness(l->l);
    *discrete = d.discrete ? 1 : 0;
    *min_gap = d.min_generator_norm;
    return TLA_OK;
  });
}

tla_status tla_lattice_contains(const tla_lattice* l, const tla_element* g, int* member) {
  TLA_REQUIRE(l && g && member, "null argument");
  return guarded([&] {
    if (g->g.backend() != l->l.backend())
      throw tla::Error(tla::ErrorCode::InvalidArgument, "element and lattice use different backends");
    *member = tla::lattice_membership(l->l, g->g) ? 1 : 0;
    return TLA_OK;
  });
}

tla_status tla_run_command(const char* command, const char* config_json, const tla_overrides* overrides,
                           char** output) {
  TLA_REQUIRE(command && config_json && output, "null argument");
  *output = nullptr;
  return guarded([&] {
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw tla::Error(tla::ErrorCode::Config, std::string("configuration is not valid JSON: ") + e.what());
    }
    tla::CommandOverrides ov;
    if (overrides) {
      if (overrides->has_seed) ov.seed = overrides->seed;
      if (overrides->has_steps) ov.steps = overrides->steps;
      if (overrides->has_tol) ov.tol = overrides->tol;
      ov.family = overrides->family != 0;
    }
    tla::CommandOutput r = tla::run_command(command, config, ov);
    *output = dup_string(r.text);
    if (!r.passed) return fail(TLA_ERR_SELFTEST_FAILED, std::string(command) + " found failing checks");
    return TLA_OK;
  });
}

}  // extern "C"
