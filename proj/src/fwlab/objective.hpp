#pragma once

#include "polygon.hpp"

namespace fwlab {

struct Evaluation {
  Real f;
  Vec2 g;
};

/// Convex differentiable objective with a known minimum value.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual Evaluation evaluate(const Vec2& x) const = 0;
  virtual Real min_value() const { return 0; }
};

class ZeroObjective final : public Objective {
 public:
  Evaluation evaluate(const Vec2&) const override { return {0, {0, 0}}; }
};

/// Squared distance to a segment.
class SegmentDistanceObjective final : public Objective {
 public:
  SegmentDistanceObjective(Vec2 a, Vec2 b) : a_(std::move(a)), b_(std::move(b)) {}
  Evaluation evaluate(const Vec2& x) const override {
    const Vec2 ab = b_ - a_;
    Real s = dot(x - a_, ab) / dot(ab, ab);
    if (s < 0) s = 0;
    if (s > 1) s = 1;
    const Vec2 d = x - (a_ + s * ab);
    return {dot(d, d), Real(2) * d};
  }

 private:
  Vec2 a_;
  Vec2 b_;
};

}  // namespace fwlab
