#include "sketch.hpp"

#include "cone.hpp"
#include "geom2d.hpp"

#include <limits>
#include <random>
#include <sstream>

namespace fwlab {

namespace {

Real wrap_angle(Real a) {
  const Real two_pi = 2 * pi();
  a = boost::multiprecision::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

bool in_range(const Real& theta, const Real& lo, const Real& hi) { return wrap_angle(theta - lo) <= hi - lo; }

std::string level_text(std::size_t l) { return "level " + std::to_string(l); }

/// Smallest distance from the origin to an edge line.
Real inradius_about_origin(const ConvexPolygon& P) {
  Real best = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vec2 n = P.edge_normal(i);
    best = std::min(best, dot(P.vertex(i), n) / norm(n));
  }
  return best;
}

/// min_λ {p ∈ λB}; B contains the origin in its interior.
Real gauge(const Body& B, const Vec2& p) {
  Real lo = 0;
  Real hi = 1;
  while (!B.scaled(hi).contains(p)) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > hi * std::numeric_limits<Real>::epsilon(); ++i) {
    const Real mid = (lo + hi) / 2;
    (B.scaled(mid).contains(p) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

bool ValidationReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ValidationReport validate_sketch(const SketchSpec& spec) {
  ValidationReport report;
  auto fail = [&](const char* h, std::string w) { report.checks.push_back({h, false, std::move(w)}); };
  const std::size_t n = spec.polytopes.size();
  if (n < 2) fail("nesting", "fewer than two polytopes");

  const QVec2 origin{0, 0};
  std::vector<bool> origin_ok(n);
  for (std::size_t l = 0; l < n; ++l) {
    origin_ok[l] = spec.polytopes[l].strictly_contains(origin);
    if (!origin_ok[l]) fail("origin-interior", level_text(l));
  }

  if (spec.margins.size() + 1 != n && n >= 2) {
    fail("nesting", "expected " + std::to_string(n - 1) + " margins, got " + std::to_string(spec.margins.size()));
  } else {
    for (std::size_t l = 0; l + 1 < n; ++l) {
      const Rational& delta = spec.margins[l];
      if (!(delta > 0 && delta < 1)) {
        fail("nesting", level_text(l) + ": margin " + rational_to_string(delta) + " outside (0, 1)");
        continue;
      }
      if (!origin_ok[l] || !origin_ok[l + 1]) continue;
      const Rational m = nesting_margin_exact(spec.polytopes[l], spec.polytopes[l + 1]);
      if (m < delta || m == 0) {
        std::ostringstream os;
        os << level_text(l) << ": lambda = " << to_double(Rational(1 + delta)) << " escapes (margin "
           << to_double(m) << " < " << to_double(delta) << ")";
        fail("nesting", os.str());
      }
    }
  }

  for (const auto& m : spec.marks) {
    const std::string who = "k = " + std::to_string(m.k);
    if (m.level >= n) {
      fail("admissible-direction", who + ": level out of range");
      continue;
    }
    const auto& P = spec.polytopes[m.level];
    const auto idx = P.vertex_index(m.vertex);
    if (!idx) {
      fail("admissible-direction", who + ": not a vertex of " + level_text(m.level));
      continue;
    }
    if (boost::multiprecision::abs(norm(m.direction) - 1) > Real(1e-12)) {
      fail("admissible-direction", who + ": direction not unit");
      continue;
    }
    const auto cones = cones_at_vertex_index(to_real(P), *idx);
    if (!cones.admissible.contains(m.direction, Real(1e-12))) fail("admissible-direction", who);
  }

  if (n > 0) {
    if (spec.domain.size() < 3 || spec.domain.degenerate()) {
      fail("domain", "domain is not a polygon");
    } else {
      for (const auto& v : spec.polytopes[0].vertices())
        if (!spec.domain.strictly_contains(v)) {
          fail("domain", "outermost polytope not interior to domain");
          break;
        }
    }
  }

  for (const char* h : {"admissible-direction", "nesting", "origin-interior", "domain"}) {
    bool seen = false;
    for (const auto& c : report.checks) seen = seen || c.hypothesis == h;
    if (!seen) report.checks.push_back({h, true, {}});
  }
  return report;
}

Real extreme_ratio(const Vec2& P, const Real& c1, const Vec2& Q, const Real& c2, const Real& lo, const Real& hi,
                   bool maximize, Vec2* at) {
  auto value = [&](const Vec2& n) { return (dot(P, n) + c1) / (dot(Q, n) + c2); };
  Real best_val = 0;
  Vec2 best_dir;
  bool have = false;
  auto consider = [&](const Real& theta) {
    const Vec2 n = unit_at(theta);
    const Real v = value(n);
    if (!have || (maximize ? v > best_val : v < best_val)) {
      best_val = v;
      best_dir = n;
      have = true;
    }
  };
  consider(lo);
  consider(hi);
  // Stationary directions solve cross(n, W) = cross(P, Q) with W = c2·P − c1·Q.
  const Vec2 W = c2 * P - c1 * Q;
  const Real w = norm(W);
  if (w > 0) {
    const Real s = cross(P, Q) / w;
    if (boost::multiprecision::abs(s) <= 1) {
      const Real psi = angle_of(W);
      const Real a = boost::multiprecision::asin(s);
      for (const Real& theta : {Real(psi - a), Real(psi - pi() + a)})
        if (in_range(theta, lo, hi)) consider(theta);
    }
  }
  if (at) *at = best_dir;
  return best_val;
}

SketchObjective::SketchObjective(const SketchSpec& spec, const ObjectiveParams& params) {
  const auto report = validate_sketch(spec);
  for (const auto& c : report.checks)
    if (!c.pass) throw Error("sketch fails hypothesis " + c.hypothesis + ": " + c.witness);
  if (!(params.r_scale >= 0)) throw Error("r_scale must be nonnegative");
  if (!(params.eta0 > 0)) throw Error("eta0 must be positive");

  const std::size_t n = spec.polytopes.size();
  std::vector<ConvexPolygon> polys;
  for (const auto& q : spec.polytopes) polys.push_back(to_real(q));

  std::vector<std::vector<Vec2>> dirs;
  for (const auto& P : polys) dirs.push_back(bisector_directions(P));
  std::vector<std::vector<bool>> marked(n);
  for (std::size_t l = 0; l < n; ++l) marked[l].assign(polys[l].size(), false);
  for (const auto& m : spec.marks) {
    const std::size_t i = *spec.polytopes[m.level].vertex_index(m.vertex);
    if (marked[m.level][i] && dirs[m.level][i] != m.direction)
      throw Error("conflicting directions at one vertex of " + level_text(m.level));
    dirs[m.level][i] = m.direction;
    marked[m.level][i] = true;
  }

  for (std::size_t l = 0; l < n; ++l) {
    Real delta = to_real(spec.margins[std::min(l, n - 2)]);
    if (l > 0) delta = std::min(delta, to_real(spec.margins[l - 1]));
    const Real limit = anchored_limit(polys[l], dirs[l]);
    if (!(limit > 0)) throw Error("rounding infeasible at level " + std::to_string(l));
    Real r = std::min({params.r_scale, delta / 10 * std::min(Real(1), inradius_about_origin(polys[l])), limit / 2});
    radii_.push_back(r);
    bodies_.push_back(anchored_body(polys[l], dirs[l], r));
  }

  auto make_shell = [](const Body& a, const Body& b) {
    ShellData s{a, b, 0, common_fan({&a.core(), &b.core()})};
    for (const auto& p : s.pieces) {
      const Vec2 Q = a.core().vertex(p.support[0]) - b.core().vertex(p.support[1]);
      const Real c = a.radius() - b.radius();
      // The gap ⟨Q,n⟩ + c is smallest at an endpoint or at n = −Q/|Q|.
      std::vector<Real> probes{p.lo, p.hi};
      if (norm(Q) > 0) probes.push_back(angle_of(-Q));
      for (const auto& theta : probes) {
        if (!in_range(theta, p.lo, p.hi)) continue;
        const Vec2 u = unit_at(theta);
        if (!(dot(Q, u) + c > 0)) {
          std::ostringstream os;
          os << "levels not strictly nested in direction u = (" << to_double(u.x) << ", " << to_double(u.y) << ")";
          throw Error(os.str());
        }
      }
    }
    return s;
  };

  std::vector<ShellData> inner_shells;
  for (std::size_t l = 0; l + 1 < n; ++l) inner_shells.push_back(make_shell(bodies_[l], bodies_[l + 1]));

  // Level drops: the drop ratio never exceeds the smallest ratio of
  // consecutive support gaps, which keeps h(η, u) concave in η.
  std::vector<Real> drop(n - 1);
  drop[0] = 1;
  for (std::size_t l = 0; l + 2 < n; ++l) {
    const Body& a = bodies_[l];
    const Body& b = bodies_[l + 1];
    const Body& c = bodies_[l + 2];
    Real ratio = std::numeric_limits<Real>::infinity();
    for (const auto& p : common_fan({&a.core(), &b.core(), &c.core()})) {
      const Vec2& av = a.core().vertex(p.support[0]);
      const Vec2& bv = b.core().vertex(p.support[1]);
      const Vec2& cv = c.core().vertex(p.support[2]);
      ratio = std::min(ratio, extreme_ratio(bv - cv, b.radius() - c.radius(), av - bv, a.radius() - b.radius(), p.lo,
                                            p.hi, false));
    }
    drop[l + 1] = drop[l] * ratio;
  }

  domain_ = to_real(spec.domain);
  Real lambda = 1;
  for (const auto& v : domain_.vertices()) lambda = std::max(lambda, gauge(bodies_[0], v));
  lambda *= Real(105) / 100;
  outer_ = bodies_[0].scaled(lambda);
  ShellData outer_shell = make_shell(outer_, bodies_[0]);
  {
    const ShellData& s0 = inner_shells[0];
    Real worst = 0;
    for (const auto& p : common_fan({&s0.outer.core(), &s0.inner.core()})) {
      const Vec2& av = s0.outer.core().vertex(p.support[0]);
      const Vec2& bv = s0.inner.core().vertex(p.support[1]);
      worst = std::max(worst, extreme_ratio((lambda - 1) * av, (lambda - 1) * s0.outer.radius(), av - bv,
                                            s0.outer.radius() - s0.inner.radius(), p.lo, p.hi, true));
    }
    outer_shell.drop = drop[0] * worst;
  }

  eta_.assign(n, 0);
  for (std::size_t l = n - 1; l-- > 0;) eta_[l] = eta_[l + 1] + drop[l];
  const Real scale = params.eta0 / eta_[0];
  for (auto& e : eta_) e *= scale;
  for (std::size_t l = 0; l + 1 < n; ++l) inner_shells[l].drop = eta_[l] - eta_[l + 1];
  outer_shell.drop *= scale;
  eta_outer_ = eta_[0] + outer_shell.drop;

  shells_.push_back(std::move(outer_shell));
  for (auto& s : inner_shells) shells_.push_back(std::move(s));
}

Real SketchObjective::gap(const ShellData& s, const Vec2& n) const { return s.outer.support(n) - s.inner.support(n); }

Real SketchObjective::locate(const ShellData& s, const Vec2& x, Vec2& normal) const {
  const Real ra = s.outer.radius();
  const Real rb = s.inner.radius();
  Real best = std::numeric_limits<Real>::infinity();
  auto consider = [&](const Vec2& n, const Vec2& a, const Vec2& b) {
    const Real num = dot(a - x, n) + ra;
    const Real den = dot(a - b, n) + ra - rb;
    const Real v = num / den;
    if (v < best) {
      best = v;
      normal = n;
    }
  };
  for (const auto& p : s.pieces) {
    const Vec2& a = s.outer.core().vertex(p.support[0]);
    const Vec2& b = s.inner.core().vertex(p.support[1]);
    consider(unit_at(p.lo), a, b);
    consider(unit_at(p.hi), a, b);
    // Interior candidates: x on the arc of radius ρ(σ) about c(σ).
    const Vec2 w = x - a;
    const Vec2 e = b - a;
    const Real dr = rb - ra;
    const Real A = dot(e, e) - dr * dr;
    const Real B = dot(w, e) + ra * dr;
    const Real C = dot(w, w) - ra * ra;
    std::vector<Real> roots;
    if (A == 0) {
      if (B != 0) roots.push_back(C / (2 * B));
    } else {
      const Real disc = B * B - A * C;
      if (disc >= 0) {
        const Real sq = boost::multiprecision::sqrt(disc);
        const Real q = B >= 0 ? B + sq : B - sq;
        if (q != 0) {
          roots.push_back(q / A);
          roots.push_back(C / q);
        } else {
          roots.push_back(0);
        }
      }
    }
    for (const auto& sigma : roots) {
      const Real rho = ra + sigma * dr;
      if (!(rho > 0)) continue;
      const Vec2 d = x - (a + sigma * e);
      const Real len = norm(d);
      if (!(len > 0)) continue;
      const Vec2 n = d / len;
      if (in_range(angle_of(n), p.lo, p.hi)) consider(n, a, b);
    }
  }
  return best;
}

ShellEvaluation SketchObjective::value_and_gradient(const Vec2& x) const {
  if (!contains(domain_, x, Real(1e-12))) throw Error("outside domain");
  const int last = static_cast<int>(bodies_.size()) - 1;
  if (bodies_.back().contains(x)) return {0, {0, 0}, {last, 0}};
  if (!outer_.contains(x)) throw Error("outside domain");
  int lo = -1;
  int hi = last;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (bodies_[mid].contains(x) ? lo : hi) = mid;
  }
  const ShellData& s = shells_[lo + 1];
  Vec2 n;
  Real sigma = locate(s, x, n);
  if (sigma < 0) sigma = 0;
  if (sigma > 1) sigma = 1;
  const Real top = lo < 0 ? eta_outer_ : eta_[lo];
  return {top - sigma * s.drop, (s.drop / gap(s, n)) * n, {lo, sigma}};
}

Evaluation SketchObjective::evaluate(const Vec2& x) const {
  auto r = value_and_gradient(x);
  return {r.f, r.g};
}

Vec2 SketchObjective::marked_point(const Mark& m) const { return bodies_.at(m.level).support_point(m.direction); }

Real lipschitz_estimate(const Objective& obj, const ConvexPolygon& region, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw Error("lipschitz_estimate needs at least 100 samples");
  std::mt19937_64 rng(seed);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& v : region.vertices()) {
    x0 = std::min(x0, to_double(v.x));
    x1 = std::max(x1, to_double(v.x));
    y0 = std::min(y0, to_double(v.y));
    y1 = std::max(y1, to_double(v.y));
  }
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1), angle(0, 2 * 3.141592653589793);
  auto sample = [&] {
    for (;;) {
      const Vec2 p{Real(ux(rng)), Real(uy(rng))};
      if (region.contains(p)) return p;
    }
  };
  const Real h = diameter(region) / boost::multiprecision::sqrt(Real(n_samples));
  Real best = 0;
  auto pair = [&](const Vec2& p, const Vec2& q) {
    const Real d = norm(q - p);
    if (!(d > 0)) return;
    best = std::max(best, norm(obj.evaluate(q).g - obj.evaluate(p).g) / d);
  };
  for (std::size_t i = 0; i < n_samples / 2; ++i) pair(sample(), sample());
  for (std::size_t i = n_samples / 2; i < n_samples; ++i) {
    for (;;) {
      const Vec2 p = sample();
      const Vec2 q = p + h * unit_at(Real(angle(rng)));
      if (!region.contains(q)) continue;
      pair(p, q);
      break;
    }
  }
  return best;
}

}  // namespace fwlab
