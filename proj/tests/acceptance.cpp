// Acceptance gate: one PASS/FAIL line per criterion. Exit status is 0 when
// the failing criteria are exactly the ones named by --expect-fail.
#include "fwlab/analysis.hpp"
#include "fwlab/counterexamples.hpp"
#include "fwlab/geom2d.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace fwlab;
using boost::multiprecision::abs;

namespace {

// Pinned tolerances and budgets.
const Real kRScale = Real(1) / 10000;
const double kCTol = 10 * 1e-4 + 1e-10;  // per-iterate reference agreement
const double kLineTol = 1e-12;
const std::size_t kNumericDepth = 50;    // smallest depth covering t ≤ 50
const std::size_t kLipschitzSamples = 1000;
const std::uint64_t kSeed = 1;

struct Result {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Collects failed sub-checks of one criterion.
class Checks {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) failed_.push_back(what);
  }
  Result result(const std::string& summary) const {
    Result r{failed_.empty(), summary};
    for (const auto& f : failed_) r.detail += "; FAILED: " + f;
    return r;
  }

 private:
  std::vector<std::string> failed_;
};

std::string fmt(double x, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

ObjectiveParams params() {
  ObjectiveParams p;
  p.r_scale = kRScale;
  return p;
}

/// Largest ‖x_t − ref_t‖ over t ≤ horizon.
double reference_gap(const Trajectory& tr, const std::vector<QVec2>& ref, std::size_t horizon) {
  double worst = 0;
  for (std::size_t t = 0; t <= horizon; ++t) worst = std::max(worst, to_double(norm(tr.points[t].x - to_real(ref[t]))));
  return worst;
}

Trajectory line_search_run(const Instance& inst, const SketchObjective& obj, std::size_t T) {
  return run_fw(to_real(inst.C), obj, StepStrategy::line_search(Real(kLineTol)), {}, to_real(inst.x0), T);
}

// Runs shared between criteria (rates reuse the structural runs).
struct Runs {
  std::vector<std::pair<std::string, Result>> rates;
};

Result criterion1() {
  Timer clock;
  const auto ref = reference_trajectory(gen_ce1(10), 1000);
  Checks c;
  for (std::size_t t = 0; t < ref.size(); ++t)
    if (ref[t].x != (t % 2 == 0 ? Rational(1, 4) : Rational(-1, 4))) {
      c.require(false, "abscissa at t = " + std::to_string(t));
      break;
    }
  const double s = clock.seconds();
  c.require(s < 1, "runtime");
  return c.result("line-search reference, T = 1000: abscissa (-1)^t/4 exactly (" + fmt(s) + " s)");
}

Result criterion2(Runs& runs) {
  Timer clock;
  const Instance inst = gen_ce1(kNumericDepth);
  const SketchObjective obj(*inst.spec, params());
  const auto tr = line_search_run(inst, obj, 50);
  const double gap = reference_gap(tr, reference_trajectory(inst, 50), 50);
  const auto nc = non_cauchy_certificate(tr, Real(0.4), 2);
  const double s = clock.seconds();
  Checks c;
  c.require(gap <= kCTol, "reference agreement");
  c.require(nc.covers_all, "non-Cauchy events at every window start");
  c.require(s < 10, "runtime");
  const Real L = 2 * lipschitz_estimate(obj, to_real(inst.C), kLipschitzSamples, kSeed);
  const auto rate = check_rates(tr, L, diameter(to_real(inst.C)), 0);
  runs.rates.push_back({"ce1", {rate.ok, "worst ratio " + fmt(to_double(rate.worst_ratio))}});
  return c.result("line-search numeric (depth " + std::to_string(kNumericDepth) + ", T = 50): max |x_t - ref| = " +
                  fmt(gap) + " <= " + fmt(kCTol) + ", non-Cauchy " + std::to_string(nc.events.size()) + "/" +
                  std::to_string(nc.window_starts) + " (" + fmt(s) + " s)");
}

Result criterion3(Runs& runs) {
  Timer clock;
  Checks c;
  const auto lam = ce2_factors(1000);
  bool decreasing = true;
  for (std::size_t k = 0; k + 1 < lam.size(); ++k) decreasing = decreasing && lam[k + 1] < lam[k];
  c.require(decreasing, "factors decreasing");
  const double fixed_gap = to_double(abs(to_real(lam[200] - Rational(20, 101))));
  c.require(fixed_gap <= 1e-12, "|lambda_200 - 20/101| <= 1e-12");
  const Instance inst = gen_ce2(kNumericDepth);
  const auto ref = reference_trajectory(inst, 1000);
  double min_step = 1e300;
  for (std::size_t t = 0; t < 1000; ++t) min_step = std::min(min_step, to_double(norm(to_real(ref[t + 1] - ref[t]))));
  c.require(min_step >= 0.2814 - 1e-12, "reference min step");
  const SketchObjective obj(*inst.spec, params());
  const auto tr = line_search_run(inst, obj, 50);
  const double gap = reference_gap(tr, ref, 50);
  c.require(gap <= kCTol, "reference agreement");
  const Real L = 2 * lipschitz_estimate(obj, to_real(inst.C), kLipschitzSamples, kSeed);
  const auto rate = check_rates(tr, L, diameter(to_real(inst.C)), 0);
  runs.rates.push_back({"ce2", {rate.ok, "worst ratio " + fmt(to_double(rate.worst_ratio))}});
  return c.result("square: |lambda_200 - 20/101| = " + fmt(fixed_gap) + ", min step " + fmt(min_step, 6) +
                  ", max |x_t - ref| = " + fmt(gap) + " (" + fmt(clock.seconds()) + " s)");
}

Result criterion4(Runs& runs) {
  Timer clock;
  const Instance inst = gen_ce3(2, 40);
  const SketchObjective obj(*inst.spec, params());
  const Real Lhat = lipschitz_estimate(obj, to_real(inst.C), kLipschitzSamples, kSeed);
  const Real L = 2 * Lhat;
  const auto tr = run_fw(to_real(inst.C), obj, StepStrategy::closed(L), {}, to_real(inst.x0), 20000);
  const double s = clock.seconds();
  const auto off = off_segment_answers(tr, Real(1e-9));
  Real max_gamma = 0;
  for (std::size_t i = 0; i + 1 < tr.points.size(); ++i) max_gamma = std::max(max_gamma, tr.points[i].gamma);
  const auto trend = gamma_trend(tr);
  const auto disp = displacement_events(tr, inst.strips, Real(3) / 26);
  const auto signs = strip_sign_violations(tr, inst.strips);
  Checks c;
  c.require(off.empty(), "answers on [(-1,0),(1,0)]");
  c.require(max_gamma < 1, "gamma < 1");
  c.require(trend.last <= trend.first / 2, "gamma decay");
  c.require(disp.count >= 10, "displacement events >= 10 (got " + std::to_string(disp.count) + ")");
  c.require(signs.empty(), "strip oracle sign");
  c.require(s < 60, "runtime");
  const auto rate = check_rates(tr, L, diameter(to_real(inst.C)), 0);
  runs.rates.push_back({"ce3", {rate.ok, "worst ratio " + fmt(to_double(rate.worst_ratio))}});
  std::string visited;
  for (std::size_t i = 0; i < disp.visited.size(); ++i)
    visited += (i ? "," : "") + std::to_string(disp.visited[i]) + ":" + fmt(to_double(disp.displacement[i]));
  return c.result("closed loop (K = 2, depth 40, L = 2*" + fmt(to_double(Lhat)) + ", T = 20000): off-segment " +
                  std::to_string(off.size()) + ", max gamma " + fmt(to_double(max_gamma)) + ", gamma deciles " +
                  fmt(to_double(trend.first)) + " -> " + fmt(to_double(trend.last)) + ", displacement events " +
                  std::to_string(disp.count) + " (strip:displacement " + visited + "), sign violations " +
                  std::to_string(signs.size()) + " (" + fmt(s) + " s)");
}

Result criterion5(Runs& runs) {
  Checks c;
  std::string summary = "open-loop exact reference, T = 100000:";
  for (auto s : {StrategyKind::Open1, StrategyKind::Open2}) {
    Timer clock;
    const Instance inst = gen_ce4(s, 10);
    const auto ref = reference_trajectory(inst, 100000);
    std::size_t left = 0, right = 0, prev_left = 0, prev_right = 0;
    bool positive = true, monotone = true;
    for (std::size_t t = 0; t < ref.size(); ++t) {
      left += ref[t].x <= Rational(-1, 4);
      right += ref[t].x >= Rational(1, 4);
      positive = positive && ref[t].y > 0;
      if (t % 10000 == 0) {
        monotone = monotone && left >= prev_left && right >= prev_right;
        prev_left = left;
        prev_right = right;
      }
    }
    const double secs = clock.seconds();
    const std::string name = to_string(s);
    c.require(left >= 20 && right >= 20, name + " crossings >= 20");
    c.require(monotone, name + " counts non-decreasing");
    c.require(positive, name + " ordinate positive");
    c.require(secs < 5, name + " runtime");
    summary += " " + name + " (" + std::to_string(left) + ", " + std::to_string(right) + ") in " + fmt(secs) + " s;";

    // Numeric run over the covered horizon, for the rate criterion.
    const Instance deep = gen_ce4(s, 200);
    const SketchObjective obj(*deep.spec, params());
    const auto tr = run_fw(to_real(deep.C), obj, s == StrategyKind::Open1 ? StepStrategy::open1() : StepStrategy::open2(),
                           {}, to_real(deep.x0), 200);
    const Real L = 2 * lipschitz_estimate(obj, to_real(deep.C), kLipschitzSamples, kSeed);
    const auto rate = check_rates(tr, L, diameter(to_real(deep.C)), 0);
    runs.rates.push_back({"ce4 " + name, {rate.ok, "worst ratio " + fmt(to_double(rate.worst_ratio))}});
  }
  summary += " ordinate > 0 throughout";
  return c.result(summary);
}

Result criterion6(Runs& runs) {
  const auto demos = gen_mis_demos(10000);
  const Instance& b = demos[1];
  const auto tr =
      run_fw(to_real(b.C), *b.demo_objective, StepStrategy::open2(), b.policy, to_real(b.x0), 10000);
  const auto rate = check_rates(tr, 2, diameter(to_real(b.C)), 0);
  runs.rates.push_back({"misB (L = 2)", {rate.ok, "worst ratio " + fmt(to_double(rate.worst_ratio))}});
  Checks c;
  std::string summary = "rate bounds (1 + 1e-9 slack):";
  for (const auto& [name, r] : runs.rates) {
    c.require(r.pass, name);
    summary += " " + name + " " + (r.pass ? "ok" : "violated") + " (" + r.detail + ");";
  }
  return c.result(summary);
}

Result criterion7() {
  Timer clock;
  Checks c;
  std::size_t specs = 0;
  double worst = 0;  // largest hausdorff(B, P)/δ
  for (std::size_t depth = 2; depth <= 40; ++depth) {
    std::vector<Instance> all{gen_ce1(depth), gen_ce2(depth), gen_ce4(StrategyKind::Open1, depth),
                              gen_ce4(StrategyKind::Open2, depth)};
    if (depth >= 4) all.push_back(gen_ce3(2, depth));
    for (const auto& inst : all) {
      ++specs;
      const std::string who = inst.name + " depth " + std::to_string(depth);
      c.require(validate_sketch(*inst.spec).pass(), who + " hypotheses");
      const SketchObjective obj(*inst.spec, params());
      const auto& m = inst.spec->margins;
      for (std::size_t l = 0; l < obj.bodies().size(); ++l) {
        Real delta = to_real(m[std::min(l, m.size() - 1)]);
        if (l > 0) delta = std::min(delta, to_real(m[l - 1]));
        const Real h = hausdorff(obj.bodies()[l], Body(to_real(inst.spec->polytopes[l]), 0));
        worst = std::max(worst, to_double(h / delta));
        if (!(h <= delta)) c.require(false, who + " hausdorff at level " + std::to_string(l));
      }
    }
  }
  return c.result(std::to_string(specs) + " generated sketches (depths 2-40) satisfy the hypotheses; max hausdorff/margin " +
                  fmt(worst) + " (" + fmt(clock.seconds()) + " s)");
}

Result criterion8() {
  Timer clock;
  Checks c;
  std::vector<Instance> all{gen_ce1(20), gen_ce2(20), gen_ce3(2, 12), gen_ce4(StrategyKind::Open1, 20),
                            gen_ce4(StrategyKind::Open2, 20)};
  std::mt19937_64 rng(kSeed);
  const double h = 1e-6;
  std::size_t violations = 0, pairs = 0, fd_points = 0;
  double fd_worst = 0, angle_worst = 0;
  for (std::size_t idx = 0; idx < all.size(); ++idx) {
    const Instance& inst = all[idx];
    const SketchObjective obj(*inst.spec, params());
    const ConvexPolygon dom = to_real(inst.spec->domain);
    Real x0 = 1e30, x1 = -1e30, y0 = 1e30, y1 = -1e30;
    for (const auto& v : dom.vertices()) x0 = std::min(x0, v.x), x1 = std::max(x1, v.x), y0 = std::min(y0, v.y), y1 = std::max(y1, v.y);
    std::uniform_real_distribution<double> ux(to_double(x0), to_double(x1)), uy(to_double(y0), to_double(y1));
    auto sample = [&] {
      for (;;) {
        const Vec2 p{Real(ux(rng)), Real(uy(rng))};
        if (dom.contains(p) && obj.outer_body().contains(p)) return p;
      }
    };
    // 10⁴ pairs in total, split across the objectives.
    const std::size_t n_pairs = 10000 / all.size() + (idx < 10000 % all.size());
    for (std::size_t i = 0; i < n_pairs; ++i, ++pairs) {
      const Vec2 a = sample(), b = sample();
      if (obj.evaluate((a + b) / 2).f > (obj.evaluate(a).f + obj.evaluate(b).f) / 2 + Real(1e-9)) ++violations;
    }
    // 500 interior points in total: shell position in [0.1, 0.9], stencil inside one shell.
    const std::size_t n_fd = 500 / all.size();
    for (std::size_t used = 0; used < n_fd;) {
      const Vec2 x = sample();
      const auto e = obj.value_and_gradient(x);
      if (!(e.shell.sigma > Real(0.1) && e.shell.sigma < Real(0.9))) continue;
      const Vec2 dx{Real(h), 0}, dy{0, Real(h)};
      const auto px = obj.value_and_gradient(x + dx), mx = obj.value_and_gradient(x - dx);
      const auto py = obj.value_and_gradient(x + dy), my = obj.value_and_gradient(x - dy);
      bool same = true;
      for (const auto* q : {&px, &mx, &py, &my}) same = same && q->shell.level == e.shell.level;
      if (!same) continue;
      const Vec2 fd{(px.f - mx.f) / (2 * Real(h)), (py.f - my.f) / (2 * Real(h))};
      fd_worst = std::max(fd_worst, to_double(norm(fd - e.g)));
      ++used;
      ++fd_points;
    }
    for (const auto& m : inst.spec->marks) {
      if (m.level + 1 >= obj.bodies().size()) continue;
      const Vec2 g = obj.value_and_gradient(obj.marked_point(m)).g;
      const Real ang = boost::multiprecision::atan2(abs(cross(g, m.direction)), dot(g, m.direction));
      angle_worst = std::max(angle_worst, to_double(ang));
    }
  }
  c.require(violations == 0, "midpoint convexity");
  c.require(fd_worst <= 50 * h, "finite differences");
  c.require(angle_worst <= 1e-9, "marked-point colinearity");
  return c.result("midpoint violations " + std::to_string(violations) + "/" + std::to_string(pairs) +
                  ", finite-difference max error " + fmt(fd_worst) + " over " + std::to_string(fd_points) +
                  " points (bound " + fmt(50 * h) + "), marked-point max angle " + fmt(angle_worst) + " rad (" +
                  fmt(clock.seconds()) + " s)");
}

Result criterion9() {
  Checks c;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  std::size_t directions = 0, rejected = 0, illegal = 0;
  const std::vector<Instance> all{gen_ce1(4), gen_ce2(4), gen_ce3(2, 4), gen_ce4(StrategyKind::Open2, 4),
                                  gen_mis_demos(10)[1]};
  for (const auto& inst : all) {
    const ConvexPolygon C = to_real(inst.C);
    for (int i = 0; i < 1000 / static_cast<int>(all.size()) + 1; ++i, ++directions) {
      const Vec2 u = unit_at(Real(angle(rng)));
      const std::size_t a = lmo_index(C, u, LmoPolicy::specified(), 0);
      c.require(a == lmo_index(C, Real(7) * u, LmoPolicy::specified(), 0), "u vs 7u");
      Real best = dot(C.vertex(a), u);
      for (std::size_t j = 0; j < C.size(); ++j) {
        const bool minimizer = dot(C.vertex(j), u) <= best;
        bool threw = false;
        try {
          lmo(C, u, LmoPolicy::scripted({j}), 0);
        } catch (const Error&) {
          threw = true;
        }
        if (!minimizer) {
          ++illegal;
          rejected += threw;
        }
        c.require(minimizer != threw, "scripted entry " + std::to_string(j));
      }
    }
  }
  return c.result("specified oracle identical for u and 7u over " + std::to_string(directions) +
                  " directions; scripted oracle rejected " + std::to_string(rejected) + "/" + std::to_string(illegal) +
                  " non-minimizing entries");
}

Result criterion10() {
  const std::size_t T = 10000;
  const Instance a = gen_mis_demos(T)[0];
  const ConvexPolygon C = to_real(a.C);
  const auto scripted = run_fw(C, *a.demo_objective, StepStrategy::open1(), a.policy, to_real(a.x0), T);
  const auto cert = certify(a, scripted, 1, 0);
  const auto specified = run_fw(C, *a.demo_objective, StepStrategy::open1(), {}, to_real(a.x0), T);
  const Vec2 limit = specified.points.back().v;
  bool monotone = true, same_answer = true;
  for (std::size_t t = 1; t < specified.points.size(); ++t) {
    monotone = monotone && norm(specified.points[t].x - limit) <= norm(specified.points[t - 1].x - limit);
    same_answer = same_answer && specified.points[t].v == limit;
  }
  // Convergence is a tail property: certify (x_t) for t ≥ 1, after the first answer is taken.
  Trajectory tail = specified;
  tail.points.erase(tail.points.begin());
  const auto spec_nc = non_cauchy_certificate(tail, cert.epsilon, T / 2);
  const double final_gap = to_double(norm(specified.points.back().x - limit));
  Checks c;
  c.require(cert.verdict == Verdict::Oscillating && cert.passed(), "scripted run oscillates");
  c.require(monotone && same_answer, "specified run monotone");
  c.require(verdict_of(spec_nc) == Verdict::Converged && final_gap < 1e-12, "specified run converges");
  return c.result("zero objective on [0, 1], T = 10000: scripted oracle " + to_string(cert.verdict) + " (" +
                  std::to_string(cert.non_cauchy.events.size()) + "/" + std::to_string(cert.non_cauchy.window_starts) +
                  " window starts move >= " + fmt(to_double(cert.epsilon)) + "); specified oracle " +
                  to_string(verdict_of(spec_nc)) + ", monotone, final distance " + fmt(final_gap));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) expected.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N[,M...]]\n";
      return 2;
    }
  }

  Runs runs;
  const std::vector<std::function<Result()>> criteria{
      criterion1,
      [&] { return criterion2(runs); },
      [&] { return criterion3(runs); },
      [&] { return criterion4(runs); },
      [&] { return criterion5(runs); },
      [&] { return criterion6(runs); },
      criterion7,
      criterion8,
      criterion9,
      criterion10,
  };
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    Result r;
    try {
      r = criteria[i]();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    if (!r.pass) failed.insert(n);
    std::cout << "criterion " << n << ": " << (r.pass ? "PASS" : "FAIL") << (r.pass || !expected.count(n) ? "" : " (expected)")
              << "  " << r.detail << std::endl;
  }
  for (int n : expected)
    if (!failed.count(n)) std::cout << "criterion " << n << " was expected to fail but passed" << std::endl;
  const bool as_expected = failed == expected;
  std::cout << (as_expected ? "acceptance: outcome as expected" : "acceptance: unexpected outcome") << std::endl;
  return as_expected ? 0 : 1;
}
