#pragma once

#include "body.hpp"
#include "objective.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fwlab {

struct Mark {
  std::size_t k = 0;      ///< position in the dynamics
  std::size_t level = 0;  ///< index of the polytope carrying the vertex
  QVec2 vertex;
  Vec2 direction;  ///< unit prescribed gradient direction
};

struct SketchSpec {
  std::vector<QPolygon> polytopes;  ///< nested, outermost first
  std::vector<Mark> marks;
  std::vector<Rational> margins;  ///< one per consecutive pair
  QPolygon domain;                ///< contains the first polytope and the constraint set
};

struct HypothesisCheck {
  std::string hypothesis;  ///< "admissible-direction", "nesting", "origin-interior", "domain"
  bool pass = true;
  std::string witness;  ///< empty on pass
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool pass() const;
};

/// Never throws on hypothesis failures; each failure is a report entry.
ValidationReport validate_sketch(const SketchSpec& spec);

struct ObjectiveParams {
  Real r_scale = Real(1) / 10000;
  Real eta0 = 1;
};

struct Shell {
  int level = 0;  ///< −1 is the outer extension shell
  Real sigma = 0;
};

struct ShellEvaluation {
  Real f;
  Vec2 g;
  Shell shell;
};

/// Convex surrogate whose sublevel sets at the level values are rounded
/// versions of the sketch polytopes. Immutable after construction.
class SketchObjective final : public Objective {
 public:
  SketchObjective(const SketchSpec& spec, const ObjectiveParams& params);

  ShellEvaluation value_and_gradient(const Vec2& x) const;
  Evaluation evaluate(const Vec2& x) const override;

  std::size_t depth() const { return bodies_.size() - 1; }
  const std::vector<Body>& bodies() const { return bodies_; }
  const std::vector<Real>& levels() const { return eta_; }
  const std::vector<Real>& radii() const { return radii_; }
  /// Body bounding the outer extension shell.
  const Body& outer_body() const { return outer_; }
  const Real& outer_level() const { return eta_outer_; }
  /// Boundary point of the mark's level body with outward normal u_k.
  Vec2 marked_point(const Mark& m) const;

 private:
  struct ShellData {
    Body outer;
    Body inner;
    Real drop;  ///< level value difference across the shell
    std::vector<FanPiece> pieces;
  };

  Real locate(const ShellData& s, const Vec2& x, Vec2& normal) const;
  Real gap(const ShellData& s, const Vec2& n) const;

  std::vector<Body> bodies_;
  std::vector<Real> eta_;
  std::vector<Real> radii_;
  Body outer_;
  Real eta_outer_;
  ConvexPolygon domain_;
  std::vector<ShellData> shells_;  ///< shells_[0] is the outer extension
};

/// Extreme of (⟨P,n⟩ + c1)/(⟨Q,n⟩ + c2) over unit n in the angular range [lo, hi]
/// (denominator positive there). Returns the value and writes the direction.
Real extreme_ratio(const Vec2& P, const Real& c1, const Vec2& Q, const Real& c2, const Real& lo, const Real& hi,
                   bool maximize, Vec2* at = nullptr);

/// Max of |g(y) − g(x)|/|y − x| over random pairs in the region: half
/// global pairs, half pairs at the fixed resolution diam/√n_samples.
/// Deterministic given the seed; a lower estimate of the true constant.
Real lipschitz_estimate(const Objective& obj, const ConvexPolygon& region, std::size_t n_samples, std::uint64_t seed);

}  // namespace fwlab
