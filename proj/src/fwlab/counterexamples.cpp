#include "counterexamples.hpp"

#include "geom2d.hpp"

#include <sstream>

namespace fwlab {

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }
QVec2 qv(const Rational& x, const Rational& y) { return {x, y}; }

std::string sector_text(const ConeSector& s) {
  std::ostringstream os;
  os << "sector from (" << to_double(s.lo().x) << ", " << to_double(s.lo().y) << ") sweeping "
     << to_double(s.angle()) << " rad";
  return os.str();
}

bool near_sector(const ConeSector& K, const Vec2& u) { return K.contains(u, Real(1e-24)); }

QPolygon domain_for(const QPolygon& C, const QPolygon& P0) {
  std::vector<QVec2> pts(C.vertices().begin(), C.vertices().end());
  for (const auto& v : P0.vertices()) pts.push_back(v);
  return QPolygon::hull(std::move(pts)).scaled(q(5, 4));
}

std::vector<Rational> half_margins(const std::vector<QPolygon>& polys) {
  std::vector<Rational> out;
  for (std::size_t l = 0; l + 1 < polys.size(); ++l) out.push_back(nesting_margin_exact(polys[l], polys[l + 1]) / 2);
  return out;
}

Error violated(std::size_t k, const std::string& why) {
  return Error("construction violated at k = " + std::to_string(k) + ": " + why);
}

/// Admissible cone of P at V.
ConeSector admissible(const QPolygon& P, const QVec2& V) { return cones_at_vertex(P, V).admissible; }

/// The oracle must answer `target` for direction u: u in the interior of −N_C(target).
void require_oracle(const QPolygon& C, const QVec2& target, const Vec2& u, std::size_t k) {
  const ConvexPolygon Cr = to_real(C);
  if (lmo(Cr, u, LmoPolicy::specified(), 0) != to_real(target) ||
      !oracle_cone(Cr, to_real(target)).contains_interior(u))
    throw violated(k, "oracle does not return the intended vertex");
}

struct Ce1Level {
  QVec2 A, B, C, D;
};

std::vector<Ce1Level> ce1_levels(std::size_t n) {
  std::vector<Ce1Level> L;
  L.push_back({qv(q(-1, 2), 0), qv(q(-1, 4), q(3, 4)), qv(q(1, 4), q(3, 4)), qv(q(1, 2), 0)});
  for (std::size_t k = 0; k < n; ++k) {
    const auto& c = L.back();
    Ce1Level next;
    next.B = qv(q(-1, 4), q(3, 5) * c.C.y);
    next.C = qv(q(1, 4), q(3, 5) * c.B.y);
    next.A = qv(q(-1, 4) + (next.B.y / c.B.y) * (c.A.x + q(1, 4)), 0);
    next.D = qv(-next.A.x, 0);
    L.push_back(std::move(next));
  }
  return L;
}

QPolygon ce1_polytope(const Ce1Level& l) {
  return QPolygon::hull({l.A, l.B, l.C, l.D, -l.D, -l.C, -l.B, -l.A});
}

QVec2 ce1_iterate(const Ce1Level& l, std::size_t t) { return t % 2 == 0 ? l.C : l.B; }

QPolygon ce2_base() {
  return QPolygon::from_ccw({qv(q(-1, 10), -1), qv(1, q(-1, 10)), qv(q(1, 10), 1), qv(-1, q(1, 10))});
}

/// Vertex of the base square visited at step t: A, B, C, D by t mod 4.
QVec2 ce2_vertex(std::size_t t) {
  switch (t % 4) {
    case 0: return qv(q(-1, 10), -1);
    case 1: return qv(-1, q(1, 10));
    case 2: return qv(q(1, 10), 1);
    default: return qv(1, q(-1, 10));
  }
}

/// Corner of C the oracle answers from the step-t iterate.
QVec2 ce2_target(std::size_t t) {
  switch (t % 4) {
    case 0: return qv(-1, 1);
    case 1: return qv(1, 1);
    case 2: return qv(1, -1);
    default: return qv(-1, -1);
  }
}

/// Shared skeleton for constructions whose marks follow one iterate per level.
SketchSpec chain_spec(const QPolygon& C, const std::vector<QPolygon>& polys, const std::vector<QVec2>& iterates,
                      const std::vector<QVec2>& targets) {
  SketchSpec spec;
  spec.polytopes = polys;
  spec.margins = half_margins(polys);
  spec.domain = domain_for(C, polys.front());
  const QPolygon Cq = C;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const ConeSector K = admissible(polys[k], iterates[k]);
    Vec2 u;
    try {
      if (k == 0) {
        u = pick_direction(K, InsideCone{oracle_cone(to_real(Cq), to_real(targets[k]))});
      } else {
        u = pick_direction(K, OrthogonalTo{to_real(QVec2(iterates[k] - iterates[k - 1]))});
      }
    } catch (const Error& e) {
      throw violated(k, e.what());
    }
    require_oracle(Cq, targets[k], u, k);
    spec.marks.push_back({k, k, iterates[k], u});
  }
  return spec;
}

std::vector<Rational> open_loop_steps(StrategyKind s, std::size_t n) {
  std::vector<Rational> g;
  for (std::size_t k = 0; k < n; ++k)
    g.push_back(s == StrategyKind::Open1 ? Rational(1, k + 1) : Rational(2, k + 2));
  return g;
}

/// B_0..B_n and V_0..V_n of the open-loop construction.
void ce4_track(StrategyKind s, std::size_t n, std::vector<QVec2>& B, std::vector<QVec2>& V) {
  B.assign(1, qv(0, 1));
  V.assign(1, qv(-2, q(1, 4)));
  const auto gamma = open_loop_steps(s, n);
  const Rational quarter = q(1, 4);
  for (std::size_t k = 0; k < n; ++k) {
    const Rational& g = gamma[k];
    B.push_back((1 - g) * B[k] + g * V[k]);
    if (k == 0) {
      V.push_back(qv(1, 0));
    } else {
      const bool exits = abs(B[k + 1].x) > quarter && abs(B[k].x) <= quarter;
      V.push_back(exits ? QVec2(-V[k]) : V[k]);
    }
  }
}

QPolygon ce4_C() { return QPolygon::hull({qv(-2, q(1, 4)), qv(-1, 0), qv(0, 1), qv(1, 0)}); }

// P_0 also carries -(5/4)B_1: the first open-loop step lands on (-2, 1/4),
// whose mirror image (2, -1/4) lies outside conv{A_0, B_0, C_0, -B_0}.
QPolygon ce4_polytope(std::size_t k, const QVec2& B, const QVec2* next) {
  std::vector<QVec2> pts{qv(-2 - Rational(1, k + 1), 0), B, qv(1 + Rational(1, k + 1), 0), -B};
  if (next) pts.push_back(-q(5, 4) * *next);
  return QPolygon::hull(pts);
}

}  // namespace

Vec2 pick_direction(const ConeSector& K, const DirectionConstraint& constraint) {
  if (const auto* o = std::get_if<OrthogonalTo>(&constraint)) {
    const Vec2 p = normalized(perp(o->w));
    const bool plus = near_sector(K, p);
    const bool minus = near_sector(K, -p);
    if (plus && minus && K.angle() < pi()) return K.contains_interior(p) ? p : -p;
    if (plus) return p;
    if (minus) return -p;
    std::ostringstream os;
    os << "no direction of " << sector_text(K) << " is orthogonal to (" << to_double(o->w.x) << ", "
       << to_double(o->w.y) << ")";
    throw Error(os.str());
  }
  if (const auto* c = std::get_if<InsideCone>(&constraint)) {
    const auto both = intersect(K, c->cone);
    if (!both || both->angle() <= 0)
      throw Error("empty intersection of " + sector_text(K) + " and " + sector_text(c->cone));
    return both->midpoint();
  }
  return K.midpoint();
}

std::string to_string(InstanceId id) {
  switch (id) {
    case InstanceId::Ce1: return "1";
    case InstanceId::Ce2: return "2";
    case InstanceId::Ce3: return "3";
    case InstanceId::Ce4: return "4";
    case InstanceId::MisA: return "misA";
    case InstanceId::MisB: return "misB";
  }
  return "?";
}

InstanceId parse_instance(std::string_view name) {
  if (name == "1") return InstanceId::Ce1;
  if (name == "2") return InstanceId::Ce2;
  if (name == "3") return InstanceId::Ce3;
  if (name == "4") return InstanceId::Ce4;
  if (name == "misA") return InstanceId::MisA;
  if (name == "misB") return InstanceId::MisB;
  throw Error("unknown instance " + std::string(name));
}

std::vector<Rational> ce2_factors(std::size_t n) {
  std::vector<Rational> lam{Rational(1)};
  for (std::size_t k = 0; k < n; ++k) lam.push_back(110 * lam.back() / (90 + 101 * lam.back()));
  return lam;
}

Instance gen_ce1(std::size_t depth) {
  if (depth < 2) throw Error("depth must be at least 2");
  Instance inst;
  inst.id = InstanceId::Ce1;
  inst.name = "ce1";
  inst.depth = depth;
  inst.covered_horizon = depth;
  inst.C = QPolygon::hull({qv(-1, 0), qv(1, 0), qv(0, 1)});
  const auto levels = ce1_levels(depth);
  std::vector<QPolygon> polys;
  std::vector<QVec2> iterates;
  std::vector<QVec2> targets;
  for (std::size_t k = 0; k <= depth; ++k) {
    polys.push_back(ce1_polytope(levels[k]));
    iterates.push_back(ce1_iterate(levels[k], k));
    targets.push_back(k % 2 == 0 ? qv(-1, 0) : qv(1, 0));
  }
  inst.spec = chain_spec(inst.C, polys, iterates, targets);
  inst.strategy = StrategyKind::LineSearch;
  inst.x0 = iterates[0];
  inst.solution_set = QPolygon::segment(qv(q(-1, 4), 0), qv(q(1, 4), 0));
  inst.expected.epsilon = Rational(2, 5).convert_to<Real>();
  inst.expected.window = 2;
  return inst;
}

Instance gen_ce2(std::size_t depth) {
  if (depth < 2) throw Error("depth must be at least 2");
  Instance inst;
  inst.id = InstanceId::Ce2;
  inst.name = "ce2";
  inst.depth = depth;
  inst.covered_horizon = depth;
  inst.C = QPolygon::hull({qv(-1, -1), qv(1, -1), qv(1, 1), qv(-1, 1)});
  const auto lam = ce2_factors(depth);
  const QPolygon base = ce2_base();
  std::vector<QPolygon> polys;
  std::vector<QVec2> iterates;
  std::vector<QVec2> targets;
  for (std::size_t k = 0; k <= depth; ++k) {
    polys.push_back(base.scaled(lam[k]));
    iterates.push_back(lam[k] * ce2_vertex(k));
    targets.push_back(ce2_target(k));
  }
  inst.spec = chain_spec(inst.C, polys, iterates, targets);
  inst.strategy = StrategyKind::LineSearch;
  inst.x0 = iterates[0];
  inst.solution_set = base.scaled(Rational(20, 101));
  inst.expected.epsilon = Rational(27, 100).convert_to<Real>();
  inst.expected.window = 1;
  return inst;
}

Instance gen_ce3(int K, std::size_t depth) {
  if (K < 1) throw Error("K must be at least 1");
  if (depth < 4) throw Error("depth must be at least 4");
  Instance inst;
  inst.id = InstanceId::Ce3;
  inst.name = "ce3";
  inst.depth = depth;
  inst.K = K;
  const Rational top = boost::multiprecision::pow(boost::multiprecision::mpz_int(2), static_cast<unsigned>(K));
  inst.C = QPolygon::from_ccw({qv(-1, 0), qv(1, 0), qv(1, top), qv(-1, top)});
  const Rational c = q(61, 35);
  auto scale_of = [&](std::size_t k) {
    // 1/2^{k+1−K}
    Rational s = 1;
    const long e = static_cast<long>(k) + 1 - K;
    for (long i = 0; i < std::labs(e); ++i) s *= 2;
    return e >= 0 ? Rational(1 / s) : s;
  };
  auto sign = [](std::size_t k) { return k % 2 == 0 ? Rational(1) : Rational(-1); };  // (−1)^k
  auto X = [](std::size_t k) { return qv(0, -1 - Rational(1, k + 1)); };
  auto pow2 = [](std::size_t k) {
    Rational p = 1;
    for (std::size_t i = 0; i < k; ++i) p *= 2;
    return p;
  };

  std::vector<QPolygon> polys;
  struct Pair {
    QVec2 A, B, C, D;
  };
  std::vector<Pair> pts;
  for (std::size_t l = 0; l <= depth; ++l) {
    const std::size_t k = l / 2;
    const Rational s = scale_of(k);
    const Rational sg = sign(k);
    Pair p{qv(-sg * c, q(9, 8) * c * s), qv(sg * c, q(17, 16) * c * s), qv(sg, q(17, 16) * s), qv(-sg, q(9, 8) * s)};
    if (l % 2 == 0) {
      const Rational inv = 1 / pow2(k);
      const QVec2 Y = k % 2 == 0 ? qv(-c * (1 + inv), 0) : qv(-c * (1 + q(17, 16) * q(8, 9) * inv), 0);
      const QVec2 Z = k % 2 == 0 ? qv(c * (1 + inv), 0) : qv(c * (1 + q(9, 8) * q(16, 17) * inv), 0);
      polys.push_back(QPolygon::hull({Y, p.A, p.B, Z, X(l)}));
    } else {
      const Rational inv = 1 / pow2(k);
      const QVec2 Yp = qv(-c - q(8, 9) * inv, 0);
      const QVec2 Zp = qv(c + q(16, 17) * inv, 0);
      // The printed display drops the 61/35 factor here; the figure's coordinates keep
      // it, and without it the next polytope is not nested inside this one.
      const QVec2 Dp = qv(-sg * c, s);
      const QVec2 Cp = qv(sg * c, s);
      polys.push_back(QPolygon::hull({Yp, Dp, p.D, p.C, Cp, Zp, X(l)}));
    }
    if (l % 2 == 0) pts.push_back(p);
  }

  SketchSpec spec;
  spec.polytopes = polys;
  spec.margins = half_margins(polys);
  spec.domain = domain_for(inst.C, polys.front());
  std::size_t mark = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    const std::size_t even = 2 * k;
    const bool has_odd = even + 1 < polys.size();
    const ConeSector quadrant = k % 2 == 0 ? ConeSector::between({1, 0}, {0, 1}) : ConeSector::between({0, 1}, {-1, 0});
    auto choose = [&](const QVec2& outer_v, const QVec2& inner_v) {
      std::optional<ConeSector> both = admissible(polys[even], outer_v);
      if (has_odd) both = intersect(*both, admissible(polys[even + 1], inner_v));
      try {
        if (!both) throw Error("empty admissible intersection");
        return pick_direction(*both, InsideCone{quadrant});
      } catch (const Error& e) {
        throw Error("sign constraint unsatisfiable at k = " + std::to_string(k) + ": " + e.what());
      }
    };
    const Vec2 uAD = choose(p.A, p.D);
    const Vec2 uBC = choose(p.B, p.C);
    spec.marks.push_back({mark++, even, p.A, uAD});
    spec.marks.push_back({mark++, even, p.B, uBC});
    if (has_odd) {
      spec.marks.push_back({mark++, even + 1, p.C, uBC});
      spec.marks.push_back({mark++, even + 1, p.D, uAD});
    }
    const Rational s = scale_of(k);
    const Rational sg = sign(k);
    inst.strips.push_back({k, qv(-sg, q(7, 4) * s), qv(sg, q(7, 4) * s), qv(-sg, q(13, 8) * s), qv(sg, q(13, 8) * s),
                           qv(-sg, q(5, 4) * s), qv(sg, q(5, 4) * s)});
  }
  inst.spec = std::move(spec);
  inst.strategy = StrategyKind::Closed;
  inst.x0 = pts[0].D;
  inst.solution_set = QPolygon::segment(qv(-1, 0), qv(1, 0));
  inst.expected.epsilon = Rational(3, 26).convert_to<Real>();
  inst.expected.window = 0;  // half the horizon
  inst.expected.min_displacements = 10;
  return inst;
}

Instance gen_ce4(StrategyKind strategy, std::size_t depth) {
  if (depth < 2) throw Error("depth must be at least 2");
  if (strategy != StrategyKind::Open1 && strategy != StrategyKind::Open2)
    throw Error("the open-loop construction needs open1 or open2");
  Instance inst;
  inst.id = InstanceId::Ce4;
  inst.name = "ce4";
  inst.depth = depth;
  inst.covered_horizon = depth;
  inst.C = ce4_C();
  std::vector<QVec2> B, V;
  ce4_track(strategy, depth, B, V);
  SketchSpec spec;
  for (std::size_t k = 0; k <= depth; ++k) spec.polytopes.push_back(ce4_polytope(k, B[k], k == 0 ? &B[1] : nullptr));
  spec.margins = half_margins(spec.polytopes);
  spec.domain = domain_for(inst.C, spec.polytopes.front());
  const ConvexPolygon Cr = to_real(inst.C);
  for (std::size_t k = 0; k <= depth; ++k) {
    Vec2 u;
    try {
      u = pick_direction(admissible(spec.polytopes[k], B[k]), InsideCone{oracle_cone(Cr, to_real(V[k]))});
    } catch (const Error& e) {
      throw violated(k, e.what());
    }
    require_oracle(inst.C, V[k], u, k);
    spec.marks.push_back({k, k, B[k], u});
  }
  inst.spec = std::move(spec);
  inst.strategy = strategy;
  inst.x0 = B[0];
  inst.solution_set = QPolygon::segment(qv(-1, 0), qv(1, 0));
  // Every later band visit on the far side is at least 1/4 away in abscissa.
  inst.expected.epsilon = Rational(1, 4).convert_to<Real>();
  inst.expected.window = 0;
  inst.expected.min_band_crossings = 20;
  return inst;
}

std::vector<Instance> gen_mis_demos(std::size_t horizon) {
  std::vector<Instance> out;
  {
    // Open-loop steps average the oracle answers, so plain alternation
    // would settle at 1/2; switching on the thresholds 1/3 and 2/3 keeps
    // the running average swinging.
    Instance a;
    a.id = InstanceId::MisA;
    a.name = "misA";
    a.adversarial = true;
    a.C = QPolygon::segment(qv(0, 0), qv(1, 0));
    a.strategy = StrategyKind::Open1;
    a.x0 = qv(q(1, 2), 0);
    a.solution_set = a.C;
    a.demo_objective = std::make_shared<ZeroObjective>();
    a.lipschitz = Real(1);  // any positive constant bounds a zero gradient
    std::vector<std::size_t> script;
    Rational x = a.x0.x;
    bool up = true;
    for (std::size_t t = 0; t <= horizon; ++t) {
      if (up && x >= q(2, 3)) up = false;
      if (!up && x <= q(1, 3)) up = true;
      script.push_back(up ? 1 : 0);
      const Rational g(1, t + 1);
      x = (1 - g) * x + g * (up ? 1 : 0);
    }
    a.policy = LmoPolicy::scripted(std::move(script));
    // Within a doubling of t the iterate moves at least 1/9 (worst start 5/9).
    a.expected.epsilon = Rational(1, 10).convert_to<Real>();
    out.push_back(std::move(a));
  }
  {
    Instance b;
    b.id = InstanceId::MisB;
    b.name = "misB";
    b.adversarial = true;
    b.C = ce4_C();
    b.strategy = StrategyKind::Open2;
    // Starts off S with a unique first answer (−2, 1/4), so every later
    // iterate has a positive ordinate and stays out of argmin.
    b.x0 = qv(1, 0);
    b.solution_set = QPolygon::segment(qv(q(-1, 2), 0), qv(q(1, 2), 0));
    b.demo_objective = std::make_shared<SegmentDistanceObjective>(Vec2{Real(-0.5), 0}, Vec2{Real(0.5), 0});
    b.lipschitz = Real(2);
    // Exact simulation. Above S the answers (−1, 0) and (1, 0) tie; the
    // script keeps the side of the previous answer, so the iterate crosses S
    // and is sent back by the unique answer beyond it.
    const auto verts = b.C.vertices();
    std::vector<std::size_t> script;
    QVec2 x = b.x0;
    const Rational half = q(1, 2);
    Rational side = 0;
    for (std::size_t t = 0; t <= horizon; ++t) {
      Rational px = x.x;
      if (px < -half) px = -half;
      if (px > half) px = half;
      const QVec2 g = 2 * QVec2(x - qv(px, 0));
      Rational best;
      std::size_t pick = 0;
      bool first = true;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const Rational val = dot(verts[i], g);
        const bool same_side = verts[i].x * side > 0;
        if (first || val < best || (val == best && same_side)) {
          best = val;
          pick = i;
          first = false;
        }
      }
      script.push_back(pick);
      side = verts[pick].x;
      const Rational gam(2, t + 2);
      x = (1 - gam) * x + gam * verts[pick];
    }
    b.policy = LmoPolicy::scripted(std::move(script));
    // Within a doubling of t the iterate moves about 9/22 or more.
    b.expected.epsilon = Rational(1, 4).convert_to<Real>();
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<QVec2> reference_trajectory(const Instance& inst, std::size_t T) {
  std::vector<QVec2> xs;
  switch (inst.id) {
    case InstanceId::Ce1: {
      // Only the B, C ordinates matter for the iterates.
      Rational b = q(3, 4), c = q(3, 4);
      for (std::size_t t = 0; t <= T; ++t) {
        xs.push_back(t % 2 == 0 ? qv(q(1, 4), c) : qv(q(-1, 4), b));
        const Rational nb = q(3, 5) * c;
        c = q(3, 5) * b;
        b = nb;
      }
      return xs;
    }
    case InstanceId::Ce2: {
      const auto lam = ce2_factors(T);
      for (std::size_t t = 0; t <= T; ++t) xs.push_back(lam[t] * ce2_vertex(t));
      return xs;
    }
    case InstanceId::Ce3: throw Error("no closed-form reference; use certificates");
    case InstanceId::Ce4: {
      std::vector<QVec2> V;
      ce4_track(inst.strategy, T, xs, V);
      return xs;
    }
    case InstanceId::MisA:
    case InstanceId::MisB: {
      if (inst.policy.script.size() < T) throw Error("script shorter than the horizon");
      const auto verts = inst.C.vertices();
      QVec2 x = inst.x0;
      xs.push_back(x);
      for (std::size_t t = 0; t < T; ++t) {
        const Rational g = inst.strategy == StrategyKind::Open1 ? Rational(1, t + 1) : Rational(2, t + 2);
        x = (1 - g) * x + g * verts[inst.policy.script[t]];
        xs.push_back(x);
      }
      return xs;
    }
  }
  throw Error("unknown instance");
}

}  // namespace fwlab
