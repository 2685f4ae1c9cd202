#include "support.hpp"

#include "fwlab/counterexamples.hpp"
#include "fwlab/sketch.hpp"

#include <thread>

using namespace fwtest;

namespace {

using boost::multiprecision::abs;

/// P_ℓ = 2^{−ℓ}·[−1, 1]², levels 0..n−1, no marks, domain [−2, 2]².
SketchSpec homothetic_squares(std::size_t n) {
  SketchSpec s;
  Rational side = 1;
  for (std::size_t l = 0; l < n; ++l, side /= 2)
    s.polytopes.push_back(QPolygon::hull({qv(-side, -side), qv(side, -side), qv(side, side), qv(-side, side)}));
  s.margins.assign(n - 1, q(1, 2));
  s.domain = QPolygon::hull({qv(-2, -2), qv(2, -2), qv(2, 2), qv(-2, 2)});
  return s;
}

Real inf_norm(const Vec2& x) { return std::max(abs(x.x), abs(x.y)); }

/// Random point of the domain where the objective is defined.
Vec2 sample_domain(const Instance& inst, const SketchObjective& obj, std::mt19937_64& rng) {
  for (;;) {
    const Vec2 p = sample_in(to_real(inst.spec->domain), rng);
    if (obj.outer_body().contains(p)) return p;
  }
}

const std::vector<Instance>& sketch_instances() {
  static const std::vector<Instance> all = [] {
    std::vector<Instance> v;
    v.push_back(gen_ce1(12));
    v.push_back(gen_ce2(12));
    v.push_back(gen_ce3(2, 8));
    v.push_back(gen_ce4(StrategyKind::Open2, 12));
    return v;
  }();
  return all;
}

}  // namespace

TEST_SUITE("sketch") {
  TEST_CASE("generated sketches pass validation") {
    for (std::size_t depth : {2u, 10u, 25u}) {
      for (const auto& inst : {gen_ce1(depth), gen_ce2(depth), gen_ce4(StrategyKind::Open1, depth)}) {
        CAPTURE(inst.name);
        CHECK(validate_sketch(*inst.spec).pass());
      }
    }
    CHECK(validate_sketch(*gen_ce3(2, 10).spec).pass());
  }

  TEST_CASE("flipped direction fails the admissible-direction hypothesis with its index") {
    SketchSpec s = *gen_ce1(10).spec;
    s.marks[3].direction = -s.marks[3].direction;
    const auto r = validate_sketch(s);
    CHECK_FALSE(r.pass());
    bool found = false;
    for (const auto& c : r.checks)
      if (c.hypothesis == "admissible-direction" && !c.pass) {
        found = true;
        CHECK(c.witness.find("3") != std::string::npos);
      }
    CHECK(found);
  }

  TEST_CASE("repeated polytope fails nesting") {
    SketchSpec s = *gen_ce1(10).spec;
    s.polytopes[1] = s.polytopes[0];
    s.marks.erase(std::remove_if(s.marks.begin(), s.marks.end(), [](const Mark& m) { return m.level == 1; }),
                  s.marks.end());
    const auto r = validate_sketch(s);
    bool nesting_failed = false;
    for (const auto& c : r.checks) nesting_failed = nesting_failed || (c.hypothesis == "nesting" && !c.pass);
    CHECK(nesting_failed);
    CHECK_THROWS(SketchObjective(s, {}));
  }

  TEST_CASE("origin outside a polytope fails") {
    SketchSpec s = homothetic_squares(3);
    s.polytopes[2] = QPolygon::hull({qv(q(1, 8), q(1, 8)), qv(q(1, 4), q(1, 8)), qv(q(1, 4), q(1, 4))});
    const auto r = validate_sketch(s);
    bool failed = false;
    for (const auto& c : r.checks) failed = failed || (c.hypothesis == "origin-interior" && !c.pass);
    CHECK(failed);
  }

  TEST_CASE("homothetic squares: level drops halve and f is an affine gauge") {
    const std::size_t n = 6;
    ObjectiveParams p;
    p.r_scale = 0;
    const SketchObjective obj(homothetic_squares(n), p);
    const auto& eta = obj.levels();
    REQUIRE(eta.size() == n);
    CHECK(eta[0] == 1);
    CHECK(eta[n - 1] == 0);
    for (std::size_t l = 0; l + 2 < n; ++l)
      CHECK(d(abs((eta[l + 1] - eta[l + 2]) / (eta[l] - eta[l + 1]) - Real(1) / 2)) < 1e-30);
    // Oracle: f = (‖x‖∞ − s)/(1 − s) with s the innermost half-side.
    const Real s = Real(1) / 32;
    std::mt19937_64 rng(11);
    const ConvexPolygon box = square(-2, 2);
    for (int i = 0; i < 500; ++i) {
      const Vec2 x = sample_in(box, rng);
      if (!obj.outer_body().contains(x)) continue;
      const Real g = inf_norm(x);
      const Real expected = g <= s ? Real(0) : (g - s) / (1 - s);
      CHECK(d(abs(obj.evaluate(x).f - expected)) < 1e-28);
    }
  }

  TEST_CASE("CE2 level drops follow the homothety ratios") {
    const Instance inst = gen_ce2(10);
    const auto lam = ce2_factors(10);
    ObjectiveParams exact;
    exact.r_scale = 0;
    const SketchObjective flat(*inst.spec, exact);
    ObjectiveParams rounded;
    rounded.r_scale = Real(1) / 1000;
    const SketchObjective smooth(*inst.spec, rounded);
    const ConvexPolygon P0 = to_real(inst.spec->polytopes[0]);
    // ρ_0: distance from 0 to the nearest edge line of P_0, the smallest support value.
    Real rho0 = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < P0.size(); ++i) rho0 = std::min(rho0, cross(P0.edge(i), -P0.vertex(i)) / norm(P0.edge(i)));
    for (std::size_t l = 0; l + 2 < flat.levels().size(); ++l) {
      const Real want = to_real((lam[l + 1] - lam[l + 2]) / (lam[l] - lam[l + 1]));
      const auto& e = flat.levels();
      CHECK(d(abs((e[l + 1] - e[l + 2]) / (e[l] - e[l + 1]) - want)) < 1e-28);
      // Rounding moves each support value by at most its radius, so the gap
      // between levels j, j+1 (at least (λ_j − λ_{j+1})·ρ_0) moves by at most r_j + r_{j+1}.
      const auto& r = smooth.radii();
      auto rel = [&](std::size_t j) { return (r[j] + r[j + 1]) / (to_real(lam[j] - lam[j + 1]) * rho0); };
      const Real bound = want * ((1 + rel(l + 1)) / (1 - rel(l)) - 1);
      const auto& es = smooth.levels();
      CHECK(abs((es[l + 1] - es[l + 2]) / (es[l] - es[l + 1]) - want) <= bound);
    }
  }

  TEST_CASE("levels strictly decrease and bodies stay within the margins") {
    for (const auto& inst : sketch_instances()) {
      CAPTURE(inst.name);
      const SketchObjective obj(*inst.spec, {});
      const auto& eta = obj.levels();
      for (std::size_t l = 0; l + 1 < eta.size(); ++l) CHECK(eta[l + 1] < eta[l]);
      CHECK(eta.back() == 0);
      const auto& spec = *inst.spec;
      for (std::size_t l = 0; l < obj.bodies().size(); ++l) {
        Real delta = to_real(spec.margins[std::min(l, spec.margins.size() - 1)]);
        if (l > 0) delta = std::min(delta, to_real(spec.margins[l - 1]));
        CHECK(hausdorff(obj.bodies()[l], Body(to_real(spec.polytopes[l]), 0)) <= delta);
      }
    }
  }

  TEST_CASE("touching levels are rejected") {
    SketchSpec s = homothetic_squares(3);
    s.polytopes[1] = QPolygon::hull({qv(-1, q(-1, 2)), qv(q(1, 2), q(-1, 2)), qv(q(1, 2), q(1, 2)), qv(-1, q(1, 2))});
    CHECK_THROWS(SketchObjective(s, {}));
  }

  TEST_CASE("origin is a minimizer with zero gradient") {
    for (const auto& inst : sketch_instances()) {
      const SketchObjective obj(*inst.spec, {});
      const auto e = obj.value_and_gradient(Vec2{0, 0});
      CHECK(e.f == 0);
      CHECK(e.g == Vec2{0, 0});
    }
  }

  TEST_CASE("value on a body boundary is the level value") {
    std::mt19937_64 rng(17);
    for (const auto& inst : sketch_instances()) {
      CAPTURE(inst.name);
      const SketchObjective obj(*inst.spec, {});
      for (std::size_t l = 0; l + 1 < obj.bodies().size(); ++l)
        for (int i = 0; i < 8; ++i) {
          const Vec2 u = random_unit(rng);
          const Vec2 x = obj.bodies()[l].support_point(u);
          const auto e = obj.value_and_gradient(x);
          CHECK(d(abs(e.f - obj.levels()[l])) <= 1e-12 * std::max(1.0, d(obj.levels()[l])));
          CHECK((d(abs(e.shell.sigma)) < 1e-12 || d(abs(e.shell.sigma - 1)) < 1e-12));
        }
    }
  }

  TEST_CASE("gradient at marked points is positively colinear to the prescribed direction") {
    for (const auto& inst : sketch_instances()) {
      CAPTURE(inst.name);
      const SketchObjective obj(*inst.spec, {});
      for (const auto& m : inst.spec->marks) {
        if (m.level + 1 >= obj.bodies().size()) continue;
        const Vec2 p = obj.marked_point(m);
        CHECK(d(norm(p - to_real(m.vertex))) <= d(obj.radii()[m.level]) * 1.000001);
        const auto e = obj.value_and_gradient(p);
        REQUIRE(norm(e.g) > 0);
        CHECK(d(angle_between(e.g, m.direction)) <= 1e-9);
      }
    }
  }

  TEST_CASE("outside the domain is an error") {
    const SketchObjective obj(*gen_ce1(6).spec, {});
    CHECK_THROWS_WITH(obj.value_and_gradient(rv(50, 50)), "outside domain");
  }

  TEST_CASE("midpoint convexity on random pairs") {
    std::mt19937_64 rng(23);
    for (const auto& inst : sketch_instances()) {
      CAPTURE(inst.name);
      const SketchObjective obj(*inst.spec, {});
      int violations = 0;
      for (int i = 0; i < 2000; ++i) {
        const Vec2 a = sample_domain(inst, obj, rng);
        const Vec2 b = sample_domain(inst, obj, rng);
        const Real fm = obj.evaluate((a + b) / 2).f;
        const Real bound = (obj.evaluate(a).f + obj.evaluate(b).f) / 2;
        if (fm > bound + Real(1e-9)) ++violations;
      }
      CHECK(violations == 0);
    }
  }

  TEST_CASE("gradient is a subgradient") {
    std::mt19937_64 rng(29);
    for (const auto& inst : sketch_instances()) {
      CAPTURE(inst.name);
      const SketchObjective obj(*inst.spec, {});
      for (int i = 0; i < 500; ++i) {
        const Vec2 a = sample_domain(inst, obj, rng);
        const Vec2 b = sample_domain(inst, obj, rng);
        const auto ea = obj.evaluate(a);
        CHECK(d(obj.evaluate(b).f - ea.f - dot(ea.g, b - a)) >= -1e-9);
      }
    }
  }

  TEST_CASE("central differences match the gradient") {
    const double h = 1e-6;
    std::mt19937_64 rng(31);
    for (const auto& inst : sketch_instances()) {
      CAPTURE(inst.name);
      const SketchObjective obj(*inst.spec, {});
      double worst = 0;
      int used = 0;
      while (used < 200) {
        const Vec2 x = sample_domain(inst, obj, rng);
        const auto e = obj.value_and_gradient(x);
        // The stencil must stay inside one shell at an interior shell position.
        if (!(e.shell.sigma > Real(0.1) && e.shell.sigma < Real(0.9))) continue;
        bool same = true;
        Vec2 fd;
        for (int axis = 0; axis < 2; ++axis) {
          const Vec2 step = axis == 0 ? rv(h, 0) : rv(0, h);
          const auto ep = obj.value_and_gradient(x + step);
          const auto em = obj.value_and_gradient(x - step);
          same = same && ep.shell.level == e.shell.level && em.shell.level == e.shell.level;
          (axis == 0 ? fd.x : fd.y) = (ep.f - em.f) / (2 * Real(h));
        }
        if (!same) continue;
        ++used;
        worst = std::max(worst, d(norm(fd - e.g)));
      }
      CHECK(worst <= 50 * h);
    }
  }

  TEST_CASE("sublevel sets at the level values are the bodies") {
    std::mt19937_64 rng(37);
    for (const auto& inst : sketch_instances()) {
      CAPTURE(inst.name);
      const SketchObjective obj(*inst.spec, {});
      for (int i = 0; i < 300; ++i) {
        const Vec2 x = sample_domain(inst, obj, rng);
        const Real f = obj.evaluate(x).f;
        for (std::size_t l = 0; l < obj.bodies().size(); ++l) {
          const Real dist = obj.bodies()[l].distance(x);
          if (dist < Real(-1e-20)) CHECK(f <= obj.levels()[l]);
          if (dist > Real(1e-20)) CHECK(f > obj.levels()[l]);
        }
      }
    }
  }

  TEST_CASE("gradient points outward") {
    std::mt19937_64 rng(41);
    for (const auto& inst : sketch_instances()) {
      const SketchObjective obj(*inst.spec, {});
      for (int i = 0; i < 300; ++i) {
        const Vec2 x = sample_domain(inst, obj, rng);
        const auto e = obj.value_and_gradient(x);
        if (e.f > 0) CHECK(dot(e.g, x) > 0);
      }
    }
  }

  TEST_CASE("concurrent evaluation agrees with serial evaluation") {
    const Instance inst = gen_ce1(12);
    const SketchObjective obj(*inst.spec, {});
    std::mt19937_64 rng(43);
    std::vector<Vec2> xs;
    for (int i = 0; i < 400; ++i) xs.push_back(sample_domain(inst, obj, rng));
    std::vector<Evaluation> serial, parallel(xs.size());
    for (const auto& x : xs) serial.push_back(obj.evaluate(x));
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < xs.size(); i += 4) parallel[i] = obj.evaluate(xs[i]);
      });
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(serial[i].f == parallel[i].f);
      CHECK(serial[i].g == parallel[i].g);
    }
  }

  TEST_CASE("extreme_ratio agrees with a direction sweep") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> c(-1, 1);
    for (int i = 0; i < 100; ++i) {
      const Vec2 P = rv(c(rng), c(rng));
      const Vec2 Q = rv(c(rng), c(rng));
      const Real c2 = norm(Q) + Real(0.5);  // keeps the denominator positive
      const Real c1 = Real(c(rng));
      const Real lo = Real(c(rng) * 3);
      const Real hi = lo + Real(0.5 + c(rng) * 0.4);
      for (bool maximize : {false, true}) {
        const Real got = extreme_ratio(P, c1, Q, c2, lo, hi, maximize);
        Real best = maximize ? Real(-1e300) : Real(1e300);
        for (int k = 0; k <= 20000; ++k) {
          const Vec2 n = unit_at(lo + (hi - lo) * k / 20000);
          const Real v = (dot(P, n) + c1) / (dot(Q, n) + c2);
          best = maximize ? std::max(best, v) : std::min(best, v);
        }
        CHECK(d(maximize ? got - best : best - got) >= -1e-12);
        CHECK(d(abs(got - best)) < 1e-6);
      }
    }
  }

  TEST_CASE("lipschitz estimate") {
    CHECK(lipschitz_estimate(ZeroObjective(), square(-1, 1), 1000, 1) == 0);
    CHECK_THROWS(lipschitz_estimate(ZeroObjective(), square(-1, 1), 10, 1));
    const SketchObjective obj(homothetic_squares(6), {});
    const Real a = lipschitz_estimate(obj, square(-1, 1), 4000, 1);
    const Real b = lipschitz_estimate(obj, square(-1, 1), 4000, 2);
    CHECK(a > 0);
    CHECK(d(abs(a - b) / std::max(a, b)) <= 0.05);
    CHECK(lipschitz_estimate(obj, square(-1, 1), 4000, 1) == a);
  }
}
