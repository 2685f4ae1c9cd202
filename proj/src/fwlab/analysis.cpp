#include "analysis.hpp"

#include "geom2d.hpp"

#include <array>
#include <cmath>

namespace fwlab {

Real rate_bound(StrategyKind s, const Real& L, const Real& diam, std::size_t t) {
  if (t == 0) throw Error("bounds start at t = 1");
  if (!(L > 0) || !(diam > 0)) throw Error("rate bound needs L > 0 and diam > 0");
  const Real d2 = diam * diam;
  const Real tt = Real(t);
  switch (s) {
    case StrategyKind::Open1: return L * d2 * (1 + boost::multiprecision::log(tt)) / (2 * tt);
    case StrategyKind::Open2: return 2 * L * d2 / (tt + 2);
    case StrategyKind::Closed:
    case StrategyKind::LineSearch: return 4 * L * d2 / (tt + 2);
  }
  throw Error("unknown strategy");
}

RateReport check_rates(const Trajectory& traj, const Real& L, const Real& diam, const Real& f_min) {
  RateReport r;
  r.strategy = traj.strategy.kind;
  const Real slack = 1 + Real(1e-9);
  for (const auto& p : traj.points) {
    if (p.t == 0) continue;
    const Real bound = rate_bound(r.strategy, L, diam, p.t);
    const Real excess = p.f - f_min;
    r.worst_ratio = std::max(r.worst_ratio, excess / bound);
    if (excess > bound * slack && r.ok) {
      r.ok = false;
      r.first_violation = p.t;
    }
  }
  return r;
}

NonCauchyReport non_cauchy_certificate(const Trajectory& traj, const Real& epsilon, std::size_t window) {
  if (!(epsilon > 0)) throw Error("epsilon must be positive");
  const std::size_t n = traj.points.size();
  if (window == 0 || window >= n) throw Error("window larger than trajectory");
  // Distances are compared at double precision; ε is far above its resolution.
  std::vector<std::array<double, 2>> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = {to_double(traj.points[i].x.x), to_double(traj.points[i].x.y)};
  NonCauchyReport r;
  r.window = window;
  r.window_starts = n - window;
  const double eps = to_double(epsilon);
  for (std::size_t t = 0; t + window < n; ++t) {
    double best = -1;
    std::size_t arg = t + 1;
    for (std::size_t s = t + 1; s <= t + window; ++s) {
      const double d = std::hypot(xs[s][0] - xs[t][0], xs[s][1] - xs[t][1]);
      if (d > best) {
        best = d;
        arg = s;
      }
    }
    if (best >= eps) r.events.push_back({t, arg, Real(best)});
  }
  r.covers_all = r.events.size() == r.window_starts;
  return r;
}

BandCrossings band_crossings(const Trajectory& traj, const Real& half_width, const Real& tol) {
  BandCrossings b;
  for (const auto& p : traj.points) {
    if (p.x.x <= -half_width + tol) ++b.left;
    if (p.x.x >= half_width - tol) ++b.right;
  }
  return b;
}

namespace {

ConvexPolygon hull_of(std::initializer_list<QVec2> pts) {
  std::vector<Vec2> v;
  for (const auto& p : pts) v.push_back(to_real(p));
  return ConvexPolygon::hull(v);
}

}  // namespace

DisplacementReport displacement_events(const Trajectory& traj, const std::vector<StripLevel>& strips,
                                       const Real& threshold) {
  DisplacementReport r;
  const auto& pts = traj.points;
  for (const auto& s : strips) {
    const ConvexPolygon upper = hull_of({s.E, s.F, s.J, s.I});
    const Real floor_y = to_real(s.H.y);
    std::size_t t = 0;
    while (t < pts.size() && !contains(upper, pts[t].x, 0)) ++t;
    if (t == pts.size()) continue;
    if (!r.first_visited) r.first_visited = s.k;
    Real moved = 0;
    bool left = false;
    for (std::size_t l = t; l < pts.size(); ++l) {
      moved = std::max(moved, boost::multiprecision::abs(pts[l].x.x - pts[t].x.x));
      if (pts[l].x.y < floor_y) {
        left = true;
        break;
      }
    }
    r.visited.push_back(s.k);
    r.displacement.push_back(moved);
    if (left && moved >= threshold) ++r.count;
  }
  return r;
}

std::vector<std::size_t> strip_sign_violations(const Trajectory& traj, const std::vector<StripLevel>& strips) {
  std::vector<ConvexPolygon> boxes;
  for (const auto& s : strips) boxes.push_back(hull_of({s.E, s.F, s.G, s.H}));
  std::vector<std::size_t> bad;
  for (const auto& p : traj.points)
    for (std::size_t i = 0; i < strips.size(); ++i) {
      if (!contains(boxes[i], p.x, 0)) continue;
      const Real want = strips[i].k % 2 == 0 ? Real(-1) : Real(1);
      if (p.v.x != want || p.v.y != 0) bad.push_back(p.t);
      break;
    }
  return bad;
}

std::vector<std::size_t> off_segment_answers(const Trajectory& traj, const Real& tol) {
  std::vector<std::size_t> bad;
  for (const auto& p : traj.points)
    if (boost::multiprecision::abs(p.v.y) > tol || boost::multiprecision::abs(p.v.x) > 1 + tol) bad.push_back(p.t);
  return bad;
}

GammaTrend gamma_trend(const Trajectory& traj) {
  GammaTrend g;
  // The last record carries no step.
  const std::size_t n = traj.points.size() > 0 ? traj.points.size() - 1 : 0;
  if (n == 0) return g;
  const std::size_t tenth = std::max<std::size_t>(1, n / 10);
  for (std::size_t i = 0; i < n; ++i) {
    const Real& gamma = traj.points[i].gamma;
    g.max = std::max(g.max, gamma);
    if (i < tenth) g.first += gamma;
    if (i >= n - tenth) g.last += gamma;
  }
  g.first /= Real(tenth);
  g.last /= Real(tenth);
  return g;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Oscillating: return "oscillating";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict verdict_of(const NonCauchyReport& r) {
  if (r.covers_all && r.window_starts > 0) return Verdict::Oscillating;
  if (r.events.empty()) return Verdict::Converged;
  return Verdict::Inconclusive;
}

Certificate certify(const Instance& inst, const Trajectory& traj, const Real& L, const Real& f_min) {
  if (traj.points.size() < 2) throw Error("trajectory too short to certify");
  Certificate c;
  c.instance = inst.name;
  c.strategy = traj.strategy.kind;
  c.iterations = traj.points.size() - 1;
  c.L = L;
  c.diam = diameter(to_real(inst.C));
  c.rate = check_rates(traj, L, c.diam, f_min);
  if (!c.rate.ok) c.failures.push_back("rate bound violated at t = " + std::to_string(*c.rate.first_violation));

  // Structural checks stop where the sketch stops describing the dynamics.
  c.horizon = std::min(c.iterations, inst.covered_horizon);
  Trajectory covered = traj;
  covered.points.resize(c.horizon + 1);

  c.epsilon = inst.expected.epsilon;
  const std::size_t window = inst.expected.window > 0 ? inst.expected.window : std::max<std::size_t>(1, c.horizon / 2);
  c.non_cauchy = non_cauchy_certificate(covered, c.epsilon, window);
  c.verdict = verdict_of(c.non_cauchy);
  if (c.verdict != Verdict::Oscillating) c.failures.push_back("verdict is " + to_string(c.verdict));

  c.bands = band_crossings(covered, inst.expected.band_half_width, Real(1e-12));
  std::size_t need = inst.expected.min_band_crossings;
  if (need > 0 && inst.id == InstanceId::Ce4) {
    // Short numeric runs are held to the exact dynamics over the same horizon.
    Trajectory ref;
    for (const auto& x : reference_trajectory(inst, c.horizon)) ref.points.push_back({0, to_real(x), {}, 0, 0, 0});
    const BandCrossings want = band_crossings(ref, inst.expected.band_half_width);
    need = std::min(need, std::min(want.left, want.right));
  }
  c.required_band_crossings = need;
  if (need > 0 && std::min(c.bands.left, c.bands.right) < need)
    c.failures.push_back("band crossings below " + std::to_string(need));

  c.min_step = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i + 1 < covered.points.size(); ++i)
    c.min_step = std::min(c.min_step, norm(covered.points[i + 1].x - covered.points[i].x));

  if (!inst.strips.empty()) {
    c.displacements = displacement_events(covered, inst.strips, inst.expected.displacement_threshold);
    if (c.displacements->count < inst.expected.min_displacements)
      c.failures.push_back("displacement events " + std::to_string(c.displacements->count) + " below " +
                           std::to_string(inst.expected.min_displacements));
    ClosedLoopChecks cl;
    cl.sign_violations = strip_sign_violations(covered, inst.strips);
    cl.off_segment = off_segment_answers(covered);
    cl.gamma = gamma_trend(covered);
    if (!cl.sign_violations.empty()) c.failures.push_back("strip oracle sign violated");
    if (!cl.off_segment.empty()) c.failures.push_back("oracle answer off the solution segment");
    if (!(cl.gamma.max < 1)) c.failures.push_back("full step taken");
    if (!(cl.gamma.last <= cl.gamma.first / 2)) c.failures.push_back("step sizes do not decay");
    c.closed_loop = std::move(cl);
  }
  return c;
}

namespace {

nlohmann::json indices(const std::vector<std::size_t>& v) { return v; }

}  // namespace

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["instance"] = instance;
  j["strategy"] = to_string(strategy);
  j["iterations"] = iterations;
  j["horizon"] = horizon;
  j["L"] = to_double(L);
  j["diam"] = to_double(diam);
  j["rate"] = {{"ok", rate.ok},
               {"worst_ratio", to_double(rate.worst_ratio)},
               {"first_violation", rate.first_violation ? nlohmann::json(*rate.first_violation) : nlohmann::json()}};
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& e : non_cauchy.events) ev.push_back({e.t, e.t_prime, to_double(e.distance)});
  j["non_cauchy"] = {{"epsilon", to_double(epsilon)},
                     {"window", non_cauchy.window},
                     {"window_starts", non_cauchy.window_starts},
                     {"covers_all", non_cauchy.covers_all},
                     {"events", ev}};
  j["band_crossings"] = {bands.left, bands.right};
  j["required_band_crossings"] = required_band_crossings;
  j["min_step"] = to_double(min_step);
  if (displacements) {
    std::vector<double> d;
    for (const auto& x : displacements->displacement) d.push_back(to_double(x));
    j["displacement_events"] = {
        {"count", displacements->count},
        {"visited", indices(displacements->visited)},
        {"displacement", d},
        {"first_visited", displacements->first_visited ? nlohmann::json(*displacements->first_visited) : nlohmann::json()}};
  }
  if (closed_loop)
    j["closed_loop"] = {{"sign_violations", indices(closed_loop->sign_violations)},
                        {"off_segment", indices(closed_loop->off_segment)},
                        {"gamma_first_decile", to_double(closed_loop->gamma.first)},
                        {"gamma_last_decile", to_double(closed_loop->gamma.last)},
                        {"gamma_max", to_double(closed_loop->gamma.max)}};
  j["verdict"] = to_string(verdict);
  j["failures"] = failures;
  j["passed"] = passed();
  return j;
}

}  // namespace fwlab
