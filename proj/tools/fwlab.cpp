// Command-line front end over the C API.
#include <fwlab/fwlab.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct ApiError : std::runtime_error {
  int status;
  ApiError(int s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(int status) {
  if (status != FWLAB_OK) throw ApiError(status, fwlab_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using InstancePtr = std::unique_ptr<fwlab_instance, Deleter<fwlab_instance, fwlab_instance_free>>;
using ObjectivePtr = std::unique_ptr<fwlab_objective, Deleter<fwlab_objective, fwlab_objective_free>>;
using TrajectoryPtr = std::unique_ptr<fwlab_trajectory, Deleter<fwlab_trajectory, fwlab_trajectory_free>>;
using CertificatePtr = std::unique_ptr<fwlab_certificate, Deleter<fwlab_certificate, fwlab_certificate_free>>;

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out(s ? s : "");
  fwlab_string_free(s);
  return out;
}

struct InstanceArgs {
  std::string ce;
  std::string strategy;
  bool force = false;
  std::size_t depth = 40;
  int K = 2;
};

InstancePtr make_instance(const InstanceArgs& a) {
  fwlab_instance* raw = nullptr;
  check(fwlab_instance_create(a.ce.c_str(), a.strategy.empty() ? nullptr : a.strategy.c_str(), a.force ? 1 : 0,
                              a.depth, a.K, &raw));
  return InstancePtr(raw);
}

std::size_t default_depth() {
  if (const char* env = std::getenv("FWLAB_DEPTH_DEFAULT")) {
    try {
      const long v = std::stol(env);
      if (v >= 2) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring FWLAB_DEPTH_DEFAULT=" << env << "\n";
  }
  return 40;
}

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--ce", a.ce, "instance: 1, 2, 3, 4, misA, misB")
      ->required()
      ->check(CLI::IsMember({"1", "2", "3", "4", "misA", "misB"}));
  cmd->add_option("--strategy", a.strategy, "step strategy override")
      ->check(CLI::IsMember({"open1", "open2", "closed", "linesearch"}));
  cmd->add_flag("--force", a.force, "allow a strategy the instance was not built for");
  cmd->add_option("--depth", a.depth, "number of sketch levels (env FWLAB_DEPTH_DEFAULT)")->check(CLI::Range(2, 100000));
  cmd->add_option("--K", a.K, "height exponent of the closed-loop instance")->check(CLI::Range(1, 30));
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p);
  if (!os || !(os << content)) throw ApiError(FWLAB_ERR_IO, "cannot write " + p.string());
}

// ---- run ----

struct RunArgs {
  std::vector<std::string> ces;
  InstanceArgs inst;
  std::size_t iters = 1000;
  std::string L = "auto";
  double r_scale = 1e-4;
  std::uint64_t seed = 1;
  std::string out = ".";
  unsigned jobs = 1;
  bool specified_oracle = false;
};

struct RunOutcome {
  std::string ce;
  int code = 0;
  std::string summary;
  bool error = false;  ///< summary goes to standard error
};

RunOutcome run_one(const RunArgs& args, const std::string& ce, const fs::path& dir) {
  RunOutcome o{ce, 0, {}};
  std::ostringstream log;
  try {
    InstanceArgs ia = args.inst;
    ia.ce = ce;
    InstancePtr inst = make_instance(ia);
    fwlab_objective* obj_raw = nullptr;
    check(fwlab_objective_create(inst.get(), args.r_scale, 1.0, &obj_raw));
    ObjectivePtr obj(obj_raw);
    fwlab_run_config cfg;
    fwlab_run_config_default(&cfg);
    cfg.iterations = args.iters;
    cfg.seed = args.seed;
    cfg.specified_oracle = args.specified_oracle ? 1 : 0;
    if (args.L != "auto") {
      try {
        cfg.L = std::stod(args.L);
      } catch (const std::exception&) {
        throw ApiError(FWLAB_ERR_ARGUMENT, "--L must be auto or a positive number");
      }
      if (!(cfg.L > 0)) throw ApiError(FWLAB_ERR_ARGUMENT, "--L must be auto or a positive number");
    }
    fwlab_trajectory* traj_raw = nullptr;
    check(fwlab_run(inst.get(), obj.get(), &cfg, &traj_raw));
    TrajectoryPtr traj(traj_raw);
    fwlab_certificate* cert_raw = nullptr;
    check(fwlab_certify(inst.get(), traj.get(), 0, &cert_raw));
    CertificatePtr cert(cert_raw);

    fs::create_directories(dir);
    check(fwlab_trajectory_write(traj.get(), (dir / "traj.jsonl").c_str(), "jsonl"));
    check(fwlab_trajectory_write(traj.get(), (dir / "traj.csv").c_str(), "csv"));
    char* s = nullptr;
    check(fwlab_certificate_json(cert.get(), &s));
    const std::string cert_json = take(s);
    write_file(dir / "cert.json", cert_json + "\n");
    check(fwlab_instance_json(inst.get(), &s));
    write_file(dir / "instance.json", json::parse(take(s)).dump(1) + "\n");

    int passed = 0;
    check(fwlab_certificate_passed(cert.get(), &passed));
    const json c = json::parse(cert_json);
    log << "ce " << ce << " (" << c["strategy"].get<std::string>() << ", T = " << c["iterations"] << ", L = "
        << c["L"] << "): verdict " << c["verdict"].get<std::string>() << ", rate "
        << (c["rate"]["ok"].get<bool>() ? "ok" : "violated") << ", non-Cauchy events "
        << c["non_cauchy"]["events"].size() << "/" << c["non_cauchy"]["window_starts"] << ", band crossings "
        << c["band_crossings"].dump();
    if (c.contains("displacement_events")) log << ", displacement events " << c["displacement_events"]["count"];
    log << (passed ? " -> pass" : " -> FAIL");
    for (const auto& f : c["failures"]) log << "\n  " << f.get<std::string>();
    log << "\n  wrote " << dir.string() << "/{traj.jsonl,traj.csv,cert.json,instance.json}";
    o.code = passed ? 0 : kExitFail;
  } catch (const ApiError& e) {
    log << "ce " << ce << ": error: " << e.what();
    o.code = e.status == FWLAB_ERR_USAGE ? kExitUsage : kExitFail;
    o.error = true;
  } catch (const std::exception& e) {
    log << "ce " << ce << ": error: " << e.what();
    o.code = kExitFail;
    o.error = true;
  }
  o.summary = log.str();
  return o;
}

int cmd_run(const RunArgs& args) {
  std::vector<RunOutcome> outcomes(args.ces.size());
  const bool multi = args.ces.size() > 1;
  std::size_t next = 0;
  std::mutex m;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(m);
        if (next == args.ces.size()) return;
        i = next++;
      }
      const fs::path dir = multi ? fs::path(args.out) / ("ce" + args.ces[i]) : fs::path(args.out);
      outcomes[i] = run_one(args, args.ces[i], dir);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(args.jobs, static_cast<unsigned>(args.ces.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int code = 0;
  for (const auto& o : outcomes) {
    (o.error ? std::cerr : std::cout) << o.summary << "\n";
    code = std::max(code, o.code);
  }
  return code;
}

// ---- reference / validate / rates ----

int cmd_reference(const InstanceArgs& ia, std::size_t iters, const std::string& out) {
  InstancePtr inst = make_instance(ia);
  char* s = nullptr;
  check(fwlab_instance_reference(inst.get(), iters, &s));
  const std::string lines = take(s);
  if (out.empty() || out == "-")
    std::cout << lines;
  else
    write_file(out, lines);
  return 0;
}

int cmd_validate(const InstanceArgs& ia, const std::string& sketch_path) {
  int pass = 0;
  char* s = nullptr;
  if (!sketch_path.empty()) {
    std::ifstream is(sketch_path);
    if (!is) throw ApiError(FWLAB_ERR_IO, "cannot read " + sketch_path);
    std::stringstream buf;
    buf << is.rdbuf();
    check(fwlab_validate_sketch_json(buf.str().c_str(), &pass, &s));
  } else {
    InstancePtr inst = make_instance(ia);
    check(fwlab_instance_validate(inst.get(), &pass, &s));
  }
  std::cout << json::parse(take(s)).dump(2) << "\n";
  return pass ? 0 : kExitFail;
}

int cmd_rates(const InstanceArgs& ia, const std::string& traj_path, double L) {
  InstancePtr inst = make_instance(ia);
  fwlab_trajectory* raw = nullptr;
  check(fwlab_trajectory_read(traj_path.c_str(), &raw));
  TrajectoryPtr traj(raw);
  const std::string strategy = ia.strategy;
  char* s = nullptr;
  // The trajectory file does not record its strategy; default to the instance's.
  std::string inst_strategy;
  if (strategy.empty()) {
    check(fwlab_instance_json(inst.get(), &s));
    inst_strategy = json::parse(take(s))["run_strategy"].get<std::string>();
  }
  check(fwlab_check_rates(inst.get(), traj.get(), strategy.empty() ? inst_strategy.c_str() : strategy.c_str(), L, &s));
  const json r = json::parse(take(s));
  std::cout << r.dump(2) << "\n";
  return r["ok"].get<bool>() ? 0 : kExitFail;
}

// ---- report ----

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

using Pt = std::pair<double, double>;

std::vector<Pt> polygon_points(const json& poly) {
  std::vector<Pt> pts;
  for (const auto& p : poly.at("vertices")) pts.emplace_back(number(p[0]), number(p[1]));
  return pts;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string points_attr(const std::vector<Pt>& pts) {
  std::string s;
  for (const auto& [x, y] : pts) s += fmt(x) + "," + fmt(y) + " ";
  if (!s.empty()) s.pop_back();
  return s;
}

// World coordinates are written verbatim inside a y-flipped group so that
// tests can read iterates back from the SVG.
std::string render_svg(const json& inst, const std::vector<Pt>& xs) {
  const auto C = polygon_points(inst.at("C"));
  std::vector<std::vector<Pt>> polys;
  if (inst.contains("sketch"))
    for (const auto& P : inst["sketch"]["polytopes"]) {
      if (polys.size() == 12) break;
      polys.push_back(polygon_points(P));
    }
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  auto grow = [&](const Pt& p) {
    lo_x = std::min(lo_x, p.first), hi_x = std::max(hi_x, p.first);
    lo_y = std::min(lo_y, p.second), hi_y = std::max(hi_y, p.second);
  };
  for (const auto& p : C) grow(p);
  for (const auto& P : polys)
    for (const auto& p : P) grow(p);
  for (const auto& p : xs) grow(p);
  const double size = 800;
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double s = size * 0.9 / span;
  const double tx = size * 0.05 - s * lo_x;
  const double ty = size * 0.95 + s * lo_y;
  const double stroke = 1.5 / s;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << " " << size << "\">\n";
  os << "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
        "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n";
  os << "<g id=\"world\" transform=\"matrix(" << fmt(s) << " 0 0 " << fmt(-s) << " " << fmt(tx) << " " << fmt(ty)
     << ")\" stroke-width=\"" << fmt(stroke) << "\">\n";
  for (std::size_t i = 0; i < polys.size(); ++i)
    os << "<polygon class=\"level\" data-level=\"" << i << "\" points=\"" << points_attr(polys[i])
       << "\" fill=\"none\" stroke=\"#7f8c8d\"/>\n";
  os << "<polygon id=\"constraint\" points=\"" << points_attr(C) << "\" fill=\"#d6eaf8\" fill-opacity=\"0.5\" stroke=\"#1f618d\"/>\n";
  const auto S = polygon_points(inst.at("solution_set"));
  os << "<polyline id=\"solution\" points=\"" << points_attr(S) << "\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\""
     << fmt(3 * stroke) << "\"/>\n";
  // Arrows for the first steps, a polyline for the whole run.
  const std::size_t arrows = std::min<std::size_t>(xs.size() > 0 ? xs.size() - 1 : 0, 60);
  for (std::size_t t = 0; t < arrows; ++t)
    os << "<line class=\"step\" data-t=\"" << t << "\" x1=\"" << fmt(xs[t].first) << "\" y1=\"" << fmt(xs[t].second)
       << "\" x2=\"" << fmt(xs[t + 1].first) << "\" y2=\"" << fmt(xs[t + 1].second)
       << "\" stroke=\"#c0392b\" marker-end=\"url(#head)\"/>\n";
  std::vector<Pt> path;
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / 5000);
  for (std::size_t t = 0; t < xs.size(); t += stride) path.push_back(xs[t]);
  os << "<polyline id=\"trajectory\" data-stride=\"" << stride << "\" points=\"" << points_attr(path)
     << "\" fill=\"none\" stroke=\"#c0392b\" stroke-opacity=\"0.4\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

int report_dir(const fs::path& dir) {
  const fs::path traj_path = dir / "traj.jsonl";
  const fs::path inst_path = dir / "instance.json";
  if (!fs::exists(inst_path)) throw ApiError(FWLAB_ERR_IO, "missing " + inst_path.string());
  fwlab_trajectory* raw = nullptr;
  check(fwlab_trajectory_read(traj_path.c_str(), &raw));
  TrajectoryPtr traj(raw);
  json inst;
  try {
    std::ifstream is(inst_path);
    inst = json::parse(is);
  } catch (const json::exception& e) {
    throw ApiError(FWLAB_ERR_IO, "corrupt " + inst_path.string() + ": " + e.what());
  }
  std::optional<double> L;
  std::string strategy = inst.value("run_strategy", inst.value("strategy", ""));
  if (fs::exists(dir / "cert.json")) {
    try {
      std::ifstream is(dir / "cert.json");
      const json c = json::parse(is);
      L = c.at("L").get<double>();
      strategy = c.at("strategy").get<std::string>();
    } catch (const json::exception& e) {
      throw ApiError(FWLAB_ERR_IO, "corrupt cert.json: " + std::string(e.what()));
    }
  }
  const std::size_t n = fwlab_trajectory_length(traj.get());
  std::vector<Pt> xs(n);
  std::ostringstream csv;
  csv << "t,f,gap,bound\n";
  csv.precision(17);
  double diam = 0;
  const auto C = polygon_points(inst.at("C"));
  for (const auto& a : C)
    for (const auto& b : C) diam = std::max(diam, std::hypot(a.first - b.first, a.second - b.second));
  for (std::size_t t = 0; t < n; ++t) {
    double x[2], f, gap;
    check(fwlab_trajectory_point(traj.get(), t, x, nullptr, nullptr, &f, &gap));
    xs[t] = {x[0], x[1]};
    if (t == 0) continue;
    csv << t << ',' << f << ',' << gap << ',';
    double bound = 0;
    if (L && fwlab_rate_bound(strategy.c_str(), *L, diam, t, &bound) == FWLAB_OK) csv << bound;
    csv << '\n';
  }
  write_file(dir / "figure.svg", render_svg(inst, xs));
  write_file(dir / "rates.csv", csv.str());
  std::cout << "wrote " << (dir / "figure.svg").string() << " and " << (dir / "rates.csv").string() << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& paths) {
  std::vector<fs::path> dirs;
  for (const auto& p : paths) {
    if (!fs::is_directory(p)) throw ApiError(FWLAB_ERR_IO, "not a directory: " + p);
    if (fs::exists(fs::path(p) / "traj.jsonl")) dirs.emplace_back(p);
    for (const auto& e : fs::directory_iterator(p))
      if (e.is_directory() && fs::exists(e.path() / "traj.jsonl")) dirs.push_back(e.path());
  }
  if (dirs.empty()) {
    std::cerr << "error: no trajectories found\n";
    return kExitUsage;
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) report_dir(d);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frank-Wolfe counterexample laboratory"};
  app.require_subcommand(1);

  RunArgs run;
  run.inst.depth = default_depth();
  auto* c_run = app.add_subcommand("run", "generate an instance, run Frank-Wolfe and certify the trajectory");
  c_run->add_option("--ce", run.ces, "instances (several run independently, see --jobs)")
      ->required()
      ->check(CLI::IsMember({"1", "2", "3", "4", "misA", "misB"}));
  c_run->add_option("--strategy", run.inst.strategy, "step strategy override")
      ->check(CLI::IsMember({"open1", "open2", "closed", "linesearch"}));
  c_run->add_flag("--force", run.inst.force, "allow a strategy the instance was not built for");
  c_run->add_option("--depth", run.inst.depth, "number of sketch levels (env FWLAB_DEPTH_DEFAULT)")
      ->check(CLI::Range(2, 100000));
  c_run->add_option("--K", run.inst.K, "height exponent of the closed-loop instance")->check(CLI::Range(1, 30));
  c_run->add_option("--iters", run.iters, "iterations T");
  c_run->add_option("--L", run.L, "gradient Lipschitz constant, or auto for twice the sampled estimate");
  c_run->add_option("--r-scale", run.r_scale, "rounding radius cap")->check(CLI::PositiveNumber);
  c_run->add_option("--seed", run.seed, "seed of the Lipschitz sampling");
  c_run->add_option("--out", run.out, "output directory");
  c_run->add_option("--jobs", run.jobs, "parallel independent runs")->check(CLI::Range(1u, 256u));
  c_run->add_flag("--specified-oracle", run.specified_oracle, "replace a demo's scripted oracle by the specified one");

  InstanceArgs ref_inst;
  ref_inst.depth = default_depth();
  std::size_t ref_iters = 1000;
  std::string ref_out;
  auto* c_ref = app.add_subcommand("reference", "exact closed-form iterates as JSON lines");
  add_instance_options(c_ref, ref_inst);
  c_ref->add_option("--iters", ref_iters, "iterations T");
  c_ref->add_option("--out", ref_out, "output file (default standard output)");

  InstanceArgs val_inst;
  val_inst.depth = default_depth();
  std::string sketch_path;
  auto* c_val = app.add_subcommand("validate", "check the sketch hypotheses of an instance or a sketch file");
  c_val->add_option("--ce", val_inst.ce, "instance")->check(CLI::IsMember({"1", "2", "3", "4"}));
  c_val->add_option("--strategy", val_inst.strategy, "strategy (selects the open-loop track)")
      ->check(CLI::IsMember({"open1", "open2", "closed", "linesearch"}));
  c_val->add_option("--depth", val_inst.depth, "number of sketch levels")->check(CLI::Range(2, 100000));
  c_val->add_option("--K", val_inst.K, "height exponent")->check(CLI::Range(1, 30));
  c_val->add_option("--sketch", sketch_path, "sketch JSON file")->check(CLI::ExistingFile);

  InstanceArgs rate_inst;
  rate_inst.depth = default_depth();
  std::string rate_traj;
  double rate_L = 0;
  auto* c_rates = app.add_subcommand("rates", "check a trajectory against the worst-case rate bound");
  add_instance_options(c_rates, rate_inst);
  c_rates->add_option("--traj", rate_traj, "trajectory JSONL")->required();
  c_rates->add_option("--L", rate_L, "gradient Lipschitz constant")->required()->check(CLI::PositiveNumber);

  std::vector<std::string> report_paths;
  auto* c_report = app.add_subcommand("report", "SVG figures and gap-versus-bound CSV for run directories");
  c_report->add_option("paths", report_paths, "run directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*c_run) return cmd_run(run);
    if (*c_ref) return cmd_reference(ref_inst, ref_iters, ref_out);
    if (*c_val) {
      if (val_inst.ce.empty() == sketch_path.empty()) {
        std::cerr << "error: pass exactly one of --ce and --sketch\n";
        return kExitUsage;
      }
      return cmd_validate(val_inst, sketch_path);
    }
    if (*c_rates) return cmd_rates(rate_inst, rate_traj, rate_L);
    if (*c_report) return cmd_report(report_paths);
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.status == FWLAB_ERR_USAGE ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitFail;
}
