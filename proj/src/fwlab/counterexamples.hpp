#pragma once

#include "cone.hpp"
#include "fw.hpp"
#include "sketch.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fwlab {

struct OrthogonalTo {
  Vec2 w;
};
struct InsideCone {
  ConeSector cone;
};
using DirectionConstraint = std::variant<std::monostate, OrthogonalTo, InsideCone>;

/// Unit direction in K: the in-cone orthogonal direction, or the angular
/// midpoint of K (intersected with the given cone).
Vec2 pick_direction(const ConeSector& K, const DirectionConstraint& constraint = {});

/// Strip points of one level of the closed-loop construction.
struct StripLevel {
  std::size_t k = 0;
  QVec2 E, F, I, J, H, G;
};

/// Expected certificate thresholds for an instance.
struct CertificateTemplate {
  Real epsilon = 0;        ///< non-Cauchy amplitude
  std::size_t window = 0;  ///< non-Cauchy window
  Real band_half_width = Real(1) / 4;
  std::size_t min_band_crossings = 0;
  Real displacement_threshold = Real(3) / 26;
  std::size_t min_displacements = 0;
};

enum class InstanceId { Ce1, Ce2, Ce3, Ce4, MisA, MisB };
std::string to_string(InstanceId id);
InstanceId parse_instance(std::string_view name);

struct Instance {
  InstanceId id = InstanceId::Ce1;
  std::string name;
  QPolygon C;
  std::optional<SketchSpec> spec;  ///< absent for the misspecification demos
  StrategyKind strategy = StrategyKind::LineSearch;
  QVec2 x0;
  QPolygon solution_set;  ///< degenerate for segments
  CertificateTemplate expected;
  std::vector<StripLevel> strips;  ///< closed-loop construction only
  bool adversarial = false;        ///< misspecification demo
  LmoPolicy policy;                ///< scripted for the demos
  std::shared_ptr<const Objective> demo_objective;  ///< closed-form demo objective
  std::optional<Real> lipschitz;                    ///< exact gradient Lipschitz constant when known
  std::size_t depth = 0;
  int K = 0;
  /// Last iterate index the sketch describes; iterate t lies on level t in
  /// the instances with a closed-form reference, so later iterates are
  /// outside the construction.
  std::size_t covered_horizon = std::numeric_limits<std::size_t>::max();
};

Instance gen_ce1(std::size_t depth);
Instance gen_ce2(std::size_t depth);
Instance gen_ce3(int K, std::size_t depth);
Instance gen_ce4(StrategyKind strategy, std::size_t depth);
/// Demo A (zero objective on [0, 1]) and demo B (squared distance to a
/// segment), each with a scripted oracle; scripts cover `horizon` steps
/// plus the final record.
std::vector<Instance> gen_mis_demos(std::size_t horizon = 10000);

/// Exact iterates x_0..x_T from the closed-form dynamics.
std::vector<QVec2> reference_trajectory(const Instance& inst, std::size_t T);

/// CE2 homothety factors λ_0..λ_n.
std::vector<Rational> ce2_factors(std::size_t n);

}  // namespace fwlab
