#include "fwlab/fwlab.h"

#include "analysis.hpp"
#include "io.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

using namespace fwlab;

struct fwlab_instance {
  Instance inst;
  StrategyKind run_strategy;
};

struct fwlab_objective {
  std::shared_ptr<const Objective> obj;
  ConvexPolygon C;
  std::optional<Real> exact_L;
};

struct fwlab_trajectory {
  Trajectory traj;
  Real L = 0;  // 0 when unknown
};

struct fwlab_certificate {
  Certificate cert;
};

namespace {

thread_local std::string g_last_error;

struct UsageError : Error {
  using Error::Error;
};
struct ArgumentError : Error {
  using Error::Error;
};

// Name lookups; an unknown name is a malformed argument.
InstanceId instance_id(const char* name) {
  try {
    return parse_instance(name);
  } catch (const Error& e) {
    throw ArgumentError(e.what());
  }
}
StrategyKind strategy_kind(const char* name) {
  try {
    return parse_strategy(name);
  } catch (const Error& e) {
    throw ArgumentError(e.what());
  }
}

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs body and maps exceptions onto status codes.
template <class F>
int guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FWLAB_OK;
  } catch (const UsageError& e) {
    return fail(FWLAB_ERR_USAGE, e.what());
  } catch (const ArgumentError& e) {
    return fail(FWLAB_ERR_ARGUMENT, e.what());
  } catch (const Error& e) {
    return fail(FWLAB_ERR_COMPUTE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(FWLAB_ERR_ARGUMENT, std::string("malformed JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(FWLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FWLAB_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool compatible(InstanceId id, StrategyKind s) {
  switch (id) {
    case InstanceId::Ce1:
    case InstanceId::Ce2: return s == StrategyKind::LineSearch;
    case InstanceId::Ce3: return s == StrategyKind::Closed;
    case InstanceId::Ce4:
    case InstanceId::MisA: return s == StrategyKind::Open1 || s == StrategyKind::Open2;
    case InstanceId::MisB: return s == StrategyKind::Open2;
  }
  return false;
}

Instance generate(InstanceId id, StrategyKind s, std::size_t depth, int K) {
  switch (id) {
    case InstanceId::Ce1: return gen_ce1(depth);
    case InstanceId::Ce2: return gen_ce2(depth);
    case InstanceId::Ce3: return gen_ce3(K, depth);
    case InstanceId::Ce4:
      return gen_ce4(s == StrategyKind::Open1 || s == StrategyKind::Open2 ? s : StrategyKind::Open2, depth);
    case InstanceId::MisA: return gen_mis_demos()[0];
    case InstanceId::MisB: return gen_mis_demos()[1];
  }
  throw Error("unknown instance");
}

}  // namespace

#define FWLAB_REQUIRE(cond, msg) \
  if (!(cond)) return fail(FWLAB_ERR_ARGUMENT, msg)

extern "C" {

const char* fwlab_last_error(void) { return g_last_error.c_str(); }

const char* fwlab_version(void) { return "1.0.0"; }

void fwlab_string_free(char* s) { std::free(s); }

int fwlab_instance_create(const char* name, const char* strategy, int force, size_t depth, int K,
                          fwlab_instance** out) {
  FWLAB_REQUIRE(name && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const InstanceId id = instance_id(name);
    std::optional<StrategyKind> s;
    if (strategy) s = strategy_kind(strategy);
    if (s && !compatible(id, *s) && !force)
      throw UsageError("strategy " + std::string(strategy) + " does not match instance " + name +
                       " (pass --force to override)");
    Instance inst = generate(id, s.value_or(StrategyKind::Open2), depth, K);
    const StrategyKind run = s.value_or(inst.strategy);
    *out = new fwlab_instance{std::move(inst), run};
  });
}

void fwlab_instance_free(fwlab_instance* inst) { delete inst; }

int fwlab_instance_json(const fwlab_instance* inst, char** out) {
  FWLAB_REQUIRE(inst && out, "null argument");
  return guarded([&] {
    json j = to_json(inst->inst);
    j["run_strategy"] = to_string(inst->run_strategy);
    *out = dup_string(j.dump());
  });
}

int fwlab_instance_validate(const fwlab_instance* inst, int* pass, char** report_json) {
  FWLAB_REQUIRE(inst && pass, "null argument");
  return guarded([&] {
    if (!inst->inst.spec) throw Error("instance " + inst->inst.name + " has no sketch");
    const ValidationReport r = validate_sketch(*inst->inst.spec);
    *pass = r.pass() ? 1 : 0;
    if (report_json) *report_json = dup_string(to_json(r).dump());
  });
}

int fwlab_instance_reference(const fwlab_instance* inst, size_t T, char** jsonl) {
  FWLAB_REQUIRE(inst && jsonl, "null argument");
  return guarded([&] {
    const auto xs = reference_trajectory(inst->inst, T);
    std::string s;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      s += json{{"t", t}, {"x", mirrored(xs[t])}}.dump();
      s += '\n';
    }
    *jsonl = dup_string(s);
  });
}

int fwlab_validate_sketch_json(const char* sketch_json, int* pass, char** report_json) {
  FWLAB_REQUIRE(sketch_json && pass, "null argument");
  return guarded([&] {
    const ValidationReport r = validate_sketch(sketch_from_json(json::parse(sketch_json)));
    *pass = r.pass() ? 1 : 0;
    if (report_json) *report_json = dup_string(to_json(r).dump());
  });
}

int fwlab_objective_create(const fwlab_instance* inst, double r_scale, double eta0, fwlab_objective** out) {
  FWLAB_REQUIRE(inst && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const Instance& i = inst->inst;
    auto h = std::make_unique<fwlab_objective>();
    h->C = to_real(i.C);
    h->exact_L = i.lipschitz;
    if (i.demo_objective) {
      h->obj = i.demo_objective;
    } else {
      if (!(r_scale > 0) || !(eta0 > 0)) throw Error("r_scale and eta0 must be positive");
      h->obj = std::make_shared<SketchObjective>(*i.spec, ObjectiveParams{Real(r_scale), Real(eta0)});
    }
    *out = h.release();
  });
}

void fwlab_objective_free(fwlab_objective* obj) { delete obj; }

int fwlab_objective_eval(const fwlab_objective* obj, double x, double y, double* f, double grad[2]) {
  FWLAB_REQUIRE(obj && f && grad, "null argument");
  return guarded([&] {
    const Evaluation e = obj->obj->evaluate({Real(x), Real(y)});
    *f = to_double(e.f);
    grad[0] = to_double(e.g.x);
    grad[1] = to_double(e.g.y);
  });
}

int fwlab_objective_lipschitz(const fwlab_objective* obj, size_t samples, uint64_t seed, double* L) {
  FWLAB_REQUIRE(obj && L, "null argument");
  return guarded([&] { *L = to_double(lipschitz_estimate(*obj->obj, obj->C, samples ? samples : 1000, seed)); });
}

void fwlab_run_config_default(fwlab_run_config* cfg) {
  if (!cfg) return;
  *cfg = fwlab_run_config{1000, 0, 0, 0, 1, 0};
}

int fwlab_run(const fwlab_instance* inst, const fwlab_objective* obj, const fwlab_run_config* cfg,
              fwlab_trajectory** out) {
  FWLAB_REQUIRE(inst && obj && cfg && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const Instance& i = inst->inst;
    Real L = cfg->L > 0 ? Real(cfg->L) : Real(0);
    if (L == 0) L = obj->exact_L ? *obj->exact_L
                                 : 2 * lipschitz_estimate(*obj->obj, obj->C, cfg->samples ? cfg->samples : 1000, cfg->seed);
    if (!(L > 0)) throw Error("Lipschitz estimate is zero; pass L explicitly");
    StepStrategy st;
    switch (inst->run_strategy) {
      case StrategyKind::Open1: st = StepStrategy::open1(); break;
      case StrategyKind::Open2: st = StepStrategy::open2(); break;
      case StrategyKind::Closed: st = StepStrategy::closed(L); break;
      case StrategyKind::LineSearch: st = StepStrategy::line_search(Real(cfg->tol > 0 ? cfg->tol : 1e-12)); break;
    }
    const LmoPolicy policy = cfg->specified_oracle ? LmoPolicy::specified() : i.policy;
    auto h = std::make_unique<fwlab_trajectory>();
    h->traj = run_fw(obj->C, *obj->obj, st, policy, to_real(i.x0), cfg->iterations);
    h->L = L;
    *out = h.release();
  });
}

void fwlab_trajectory_free(fwlab_trajectory* traj) { delete traj; }

size_t fwlab_trajectory_length(const fwlab_trajectory* traj) { return traj ? traj->traj.points.size() : 0; }

double fwlab_trajectory_L(const fwlab_trajectory* traj) { return traj ? to_double(traj->L) : 0; }

int fwlab_trajectory_point(const fwlab_trajectory* traj, size_t t, double x[2], double v[2], double* gamma, double* f,
                           double* gap) {
  FWLAB_REQUIRE(traj, "null argument");
  FWLAB_REQUIRE(t < traj->traj.points.size(), "index past the trajectory end");
  const auto& p = traj->traj.points[t];
  if (x) x[0] = to_double(p.x.x), x[1] = to_double(p.x.y);
  if (v) v[0] = to_double(p.v.x), v[1] = to_double(p.v.y);
  if (gamma) *gamma = to_double(p.gamma);
  if (f) *f = to_double(p.f);
  if (gap) *gap = to_double(p.gap);
  g_last_error.clear();
  return FWLAB_OK;
}

int fwlab_trajectory_write(const fwlab_trajectory* traj, const char* path, const char* format) {
  FWLAB_REQUIRE(traj && path && format, "null argument");
  const std::string fmt(format);
  FWLAB_REQUIRE(fmt == "jsonl" || fmt == "csv", "format must be jsonl or csv");
  std::ofstream os(path);
  if (!os) return fail(FWLAB_ERR_IO, std::string("cannot write ") + path);
  return guarded([&] {
    if (fmt == "jsonl")
      traj->traj.write_jsonl(os);
    else
      traj->traj.write_csv(os);
    if (!os) throw Error(std::string("write failed: ") + path);
  });
}

int fwlab_trajectory_read(const char* path, fwlab_trajectory** out) {
  FWLAB_REQUIRE(path && out, "null argument");
  *out = nullptr;
  std::ifstream is(path);
  if (!is) return fail(FWLAB_ERR_IO, std::string("cannot read ") + path);
  return guarded([&] {
    auto h = std::make_unique<fwlab_trajectory>();
    h->traj = read_jsonl(is);
    *out = h.release();
  });
}

int fwlab_certify(const fwlab_instance* inst, const fwlab_trajectory* traj, double L, fwlab_certificate** out) {
  FWLAB_REQUIRE(inst && traj && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const Real useL = L > 0 ? Real(L) : traj->L;
    if (!(useL > 0)) throw Error("no Lipschitz constant for the rate check");
    *out = new fwlab_certificate{certify(inst->inst, traj->traj, useL, 0)};
  });
}

void fwlab_certificate_free(fwlab_certificate* cert) { delete cert; }

int fwlab_certificate_json(const fwlab_certificate* cert, char** out) {
  FWLAB_REQUIRE(cert && out, "null argument");
  return guarded([&] { *out = dup_string(cert->cert.to_json().dump(2)); });
}

int fwlab_certificate_passed(const fwlab_certificate* cert, int* passed) {
  FWLAB_REQUIRE(cert && passed, "null argument");
  *passed = cert->cert.passed() ? 1 : 0;
  g_last_error.clear();
  return FWLAB_OK;
}

int fwlab_check_rates(const fwlab_instance* inst, const fwlab_trajectory* traj, const char* strategy, double L,
                      char** report_json) {
  FWLAB_REQUIRE(inst && traj && report_json, "null argument");
  return guarded([&] {
    const Real useL = L > 0 ? Real(L) : traj->L;
    if (!(useL > 0)) throw Error("no Lipschitz constant for the rate check");
    Trajectory t = traj->traj;
    if (strategy) t.strategy.kind = strategy_kind(strategy);
    const Real diam = diameter(to_real(inst->inst.C));
    const RateReport r = check_rates(t, useL, diam, 0);
    json j{{"strategy", to_string(r.strategy)},
           {"L", to_double(useL)},
           {"diam", to_double(diam)},
           {"ok", r.ok},
           {"worst_ratio", to_double(r.worst_ratio)},
           {"first_violation", r.first_violation ? json(*r.first_violation) : json()}};
    *report_json = dup_string(j.dump(2));
  });
}

int fwlab_rate_bound(const char* strategy, double L, double diam, size_t t, double* out) {
  FWLAB_REQUIRE(strategy && out, "null argument");
  return guarded([&] { *out = to_double(rate_bound(strategy_kind(strategy), Real(L), Real(diam), t)); });
}

}  // extern "C"
