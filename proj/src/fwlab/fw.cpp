#include "fw.hpp"

#include "geom2d.hpp"

#include <json.hpp>

#include <istream>
#include <limits>
#include <ostream>

namespace fwlab {

std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::Open1: return "open1";
    case StrategyKind::Open2: return "open2";
    case StrategyKind::Closed: return "closed";
    case StrategyKind::LineSearch: return "linesearch";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "open1") return StrategyKind::Open1;
  if (name == "open2") return StrategyKind::Open2;
  if (name == "closed") return StrategyKind::Closed;
  if (name == "linesearch") return StrategyKind::LineSearch;
  throw Error("unknown strategy " + std::string(name));
}

StepStrategy StepStrategy::closed(const Real& L) {
  if (!(L > 0)) throw Error("closed-loop L must be positive");
  return {StrategyKind::Closed, L, 0};
}

StepStrategy StepStrategy::line_search(const Real& tol) {
  if (!(tol > 0 && tol <= Real(1e-6))) throw Error("line-search tolerance must lie in (0, 1e-6]");
  return {StrategyKind::LineSearch, 0, tol};
}

namespace {

// Ties are decided on the unit direction so that u and c·u (c > 0) agree.
constexpr double kTieSlack = 1e-28;

}  // namespace

std::size_t lmo_index(const ConvexPolygon& C, const Vec2& u, const LmoPolicy& policy, std::size_t t) {
  const auto verts = C.vertices();
  const Real len = norm(u);
  const Vec2 d = len > 0 ? u / len : Vec2{0, 0};
  Real best = std::numeric_limits<Real>::infinity();
  Real scale = 1;
  for (const auto& v : verts) {
    best = std::min(best, dot(v, d));
    scale = std::max(scale, norm(v));
  }
  if (policy.mode == LmoPolicy::Mode::Scripted) {
    if (t >= policy.script.size()) throw Error("script exhausted at t = " + std::to_string(t));
    const std::size_t j = policy.script[t];
    if (j >= verts.size()) throw Error("script vertex index out of range");
    if (dot(verts[j], d) > best + Real(1e-12) * scale) throw Error("script violates oracle contract");
    return j;
  }
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (dot(verts[i], d) > best + Real(kTieSlack) * scale) continue;
    if (!pick || lex_less(verts[i], verts[*pick])) pick = i;
  }
  return *pick;
}

Vec2 lmo(const ConvexPolygon& C, const Vec2& u, const LmoPolicy& policy, std::size_t t) {
  return C.vertex(lmo_index(C, u, policy, t));
}

Real line_search(const Objective& obj, const Vec2& x, const Vec2& v, const Real& tol) {
  const Vec2 d = v - x;
  if (d.x == 0 && d.y == 0) return 0;
  auto dphi = [&](const Real& g) { return dot(d, obj.evaluate(x + g * d).g); };
  // Coarse monotonicity screen of φ′ on a uniform grid.
  constexpr int kProbe = 16;
  Real prev = dphi(0);
  Real lo_val = prev;
  Real mag = boost::multiprecision::abs(prev);
  std::vector<Real> probes{prev};
  for (int i = 1; i <= kProbe; ++i) {
    probes.push_back(dphi(Real(i) / kProbe));
    mag = std::max(mag, boost::multiprecision::abs(probes.back()));
  }
  for (int i = 1; i <= kProbe; ++i)
    if (probes[i] < probes[i - 1] - Real(1e-9) * (mag + 1)) throw Error("objective not convex along segment");
  if (lo_val >= 0) return 0;
  if (probes.back() <= 0) return 1;
  Real lo = 0;
  Real hi = 1;
  for (int i = 0; i < kProbe; ++i)
    if (probes[i] < 0 && probes[i + 1] > 0) {
      lo = Real(i) / kProbe;
      hi = Real(i + 1) / kProbe;
    } else if (probes[i + 1] == 0) {
      return Real(i + 1) / kProbe;
    }
  // Continue past tol: deep landings need the zero of φ′ to full precision.
  for (int it = 0; it < 400; ++it) {
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    const Real s = dphi(mid);
    if (s == 0) return mid;
    (s < 0 ? lo : hi) = mid;
  }
  if (hi - lo > tol) throw Error("line search failed to reach tolerance");
  return (lo + hi) / 2;
}

Real step_size(const StepStrategy& s, std::size_t t, const Vec2& x, const Vec2& v, const Vec2& grad,
               const Objective* obj) {
  switch (s.kind) {
    case StrategyKind::Open1: return Real(1) / Real(t + 1);
    case StrategyKind::Open2: return Real(2) / Real(t + 2);
    case StrategyKind::Closed: {
      const Vec2 d = x - v;
      const Real len2 = dot(d, d);
      if (len2 == 0) throw Error("degenerate direction");
      Real g = dot(d, grad) / (s.L * len2);
      if (g < 0) g = 0;
      return g < 1 ? g : Real(1);
    }
    case StrategyKind::LineSearch:
      if (!obj) throw Error("line search needs the objective");
      return line_search(*obj, x, v, s.tol);
  }
  throw Error("unknown strategy");
}

Trajectory run_fw(const ConvexPolygon& C, const Objective& obj, const StepStrategy& strategy,
                  const LmoPolicy& policy, const Vec2& x0, std::size_t T) {
  if (!contains(C, x0, Real(1e-12))) throw Error("start point outside the constraint set");
  Trajectory traj{C, strategy, x0, {}};
  traj.points.reserve(T + 1);
  Vec2 x = x0;
  for (std::size_t t = 0; t <= T; ++t) {
    try {
      const Evaluation e = obj.evaluate(x);
      const Vec2 v = lmo(C, e.g, policy, t);
      TrajectoryPoint p{t, x, v, 0, e.f, dot(x - v, e.g)};
      if (t < T) {
        // A zero closed-loop direction means x is already the vertex.
        p.gamma = (strategy.kind == StrategyKind::Closed && x == v) ? Real(0) : step_size(strategy, t, x, v, e.g, &obj);
        x = (1 - p.gamma) * x + p.gamma * v;
      }
      traj.points.push_back(std::move(p));
    } catch (const Error& err) {
      throw Error("at t = " + std::to_string(t) + ": " + err.what());
    }
  }
  return traj;
}

void Trajectory::write_jsonl(std::ostream& os) const {
  for (const auto& p : points) {
    nlohmann::json j;
    j["t"] = p.t;
    j["x"] = {to_double(p.x.x), to_double(p.x.y)};
    j["v"] = {to_double(p.v.x), to_double(p.v.y)};
    j["gamma"] = to_double(p.gamma);
    j["f"] = to_double(p.f);
    j["gap"] = to_double(p.gap);
    os << j.dump() << '\n';
  }
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t,x0,x1,v0,v1,gamma,f,gap\n";
  os.precision(17);
  for (const auto& p : points)
    os << p.t << ',' << to_double(p.x.x) << ',' << to_double(p.x.y) << ',' << to_double(p.v.x) << ','
       << to_double(p.v.y) << ',' << to_double(p.gamma) << ',' << to_double(p.f) << ',' << to_double(p.gap) << '\n';
}

Trajectory read_jsonl(std::istream& is) {
  Trajectory traj;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      TrajectoryPoint p;
      p.t = j.at("t").get<std::size_t>();
      p.x = {Real(j.at("x").at(0).get<double>()), Real(j.at("x").at(1).get<double>())};
      p.v = {Real(j.at("v").at(0).get<double>()), Real(j.at("v").at(1).get<double>())};
      p.gamma = j.at("gamma").get<double>();
      p.f = j.at("f").get<double>();
      p.gap = j.at("gap").get<double>();
      traj.points.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("corrupt trajectory line: ") + e.what());
    }
  }
  if (traj.points.empty()) throw Error("empty trajectory");
  traj.x0 = traj.points.front().x;
  return traj;
}

}  // namespace fwlab
