#pragma once

#include "objective.hpp"
#include "polygon.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fwlab {

enum class StrategyKind { Open1, Open2, Closed, LineSearch };

std::string to_string(StrategyKind k);
StrategyKind parse_strategy(std::string_view name);

struct StepStrategy {
  StrategyKind kind = StrategyKind::Open1;
  Real L = 0;    ///< closed loop only
  Real tol = 0;  ///< line search only

  static StepStrategy open1() { return {StrategyKind::Open1, 0, 0}; }
  static StepStrategy open2() { return {StrategyKind::Open2, 0, 0}; }
  static StepStrategy closed(const Real& L);
  static StepStrategy line_search(const Real& tol);
};

struct LmoPolicy {
  enum class Mode { Specified, Scripted };
  Mode mode = Mode::Specified;
  std::vector<std::size_t> script;  ///< vertex index of C per iteration

  static LmoPolicy specified() { return {}; }
  static LmoPolicy scripted(std::vector<std::size_t> s) { return {Mode::Scripted, std::move(s)}; }
};

/// Index of the returned vertex of C. Specified mode returns the
/// lexicographically smallest minimizer, a function of the ray of u (u = 0
/// ties every vertex). Scripted mode returns the script entry after checking
/// it is a minimizer to 1e-12 relative tolerance.
std::size_t lmo_index(const ConvexPolygon& C, const Vec2& u, const LmoPolicy& policy, std::size_t t);
Vec2 lmo(const ConvexPolygon& C, const Vec2& u, const LmoPolicy& policy, std::size_t t);

/// γ_t for the strategy. The objective is needed only by the line search.
Real step_size(const StepStrategy& s, std::size_t t, const Vec2& x, const Vec2& v, const Vec2& grad,
               const Objective* obj = nullptr);

/// Bisection on φ′(γ) = ⟨v − x, ∇f(x + γ(v − x))⟩. The bracket is shrunk past
/// `tol` down to the scalar resolution; `tol` is the guaranteed width.
Real line_search(const Objective& obj, const Vec2& x, const Vec2& v, const Real& tol);

struct TrajectoryPoint {
  std::size_t t = 0;
  Vec2 x;
  Vec2 v;
  Real gamma;
  Real f;
  Real gap;  ///< ⟨x − v, ∇f(x)⟩
};

struct Trajectory {
  ConvexPolygon C;
  StepStrategy strategy;
  Vec2 x0;
  std::vector<TrajectoryPoint> points;  ///< T + 1 records; the last step is not applied

  void write_jsonl(std::ostream& os) const;
  void write_csv(std::ostream& os) const;
};

/// Runs T iterations of Frank-Wolfe from x0.
Trajectory run_fw(const ConvexPolygon& C, const Objective& obj, const StepStrategy& strategy,
                  const LmoPolicy& policy, const Vec2& x0, std::size_t T);

Trajectory read_jsonl(std::istream& is);

}  // namespace fwlab
