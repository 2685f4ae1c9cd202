#pragma once

#include "counterexamples.hpp"
#include "fw.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fwlab {

/// Worst-case gap bound after t iterations; requires t ≥ 1.
Real rate_bound(StrategyKind s, const Real& L, const Real& diam, std::size_t t);

struct RateReport {
  StrategyKind strategy = StrategyKind::Open1;
  bool ok = true;
  std::optional<std::size_t> first_violation;
  Real worst_ratio = 0;  ///< max over t ≥ 1 of (f_t − f_min) / bound_t
};

RateReport check_rates(const Trajectory& traj, const Real& L, const Real& diam, const Real& f_min);

struct NonCauchyEvent {
  std::size_t t = 0;
  std::size_t t_prime = 0;
  Real distance = 0;
};

struct NonCauchyReport {
  std::vector<NonCauchyEvent> events;
  std::size_t window = 0;
  std::size_t window_starts = 0;  ///< T − window + 1
  bool covers_all = false;
};

/// For every start t in [0, T − window] the farthest of x_{t+1..t+window};
/// an event when that distance is at least ε.
NonCauchyReport non_cauchy_certificate(const Trajectory& traj, const Real& epsilon, std::size_t window);

struct BandCrossings {
  std::size_t left = 0;   ///< ⟨x_t, e_1⟩ ≤ −w
  std::size_t right = 0;  ///< ⟨x_t, e_1⟩ ≥ w
};

/// `tol` widens both closed half-planes, absorbing rounding of iterates
/// that sit exactly on the band boundary.
BandCrossings band_crossings(const Trajectory& traj, const Real& half_width = Real(1) / 4, const Real& tol = 0);

struct DisplacementReport {
  std::size_t count = 0;  ///< strips whose displacement reaches the threshold
  std::vector<std::size_t> visited;  ///< strip levels entered
  std::vector<Real> displacement;    ///< one per visited level
  std::optional<std::size_t> first_visited;
};

/// Per strip level k: from the first iterate in conv{E_k, F_k, J_k, I_k} to
/// the first later iterate below ⟨H_k, e_2⟩, the largest |α_ℓ − α_t|.
/// Levels the trajectory never leaves downward do not count.
DisplacementReport displacement_events(const Trajectory& traj, const std::vector<StripLevel>& strips,
                                       const Real& threshold = Real(3) / 26);

/// Iterates inside conv{E_k, F_k, G_k, H_k} whose oracle answer is not
/// ((−1)^{k+1}, 0).
std::vector<std::size_t> strip_sign_violations(const Trajectory& traj, const std::vector<StripLevel>& strips);

/// Iterates whose oracle answer is off the segment [(−1, 0), (1, 0)].
std::vector<std::size_t> off_segment_answers(const Trajectory& traj, const Real& tol = Real(1e-9));

/// Mean γ over the first and the last tenth of the applied steps.
struct GammaTrend {
  Real first = 0;
  Real last = 0;
  Real max = 0;
};
GammaTrend gamma_trend(const Trajectory& traj);

/// Structural checks of the closed-loop construction.
struct ClosedLoopChecks {
  std::vector<std::size_t> sign_violations;
  std::vector<std::size_t> off_segment;
  GammaTrend gamma;
};

enum class Verdict { Converged, Oscillating, Inconclusive };
std::string to_string(Verdict v);

struct Certificate {
  std::string instance;
  StrategyKind strategy = StrategyKind::Open1;
  std::size_t iterations = 0;
  std::size_t horizon = 0;  ///< last iterate the structural checks cover
  Real L = 0;
  Real diam = 0;
  RateReport rate;
  Real epsilon = 0;
  NonCauchyReport non_cauchy;
  BandCrossings bands;
  std::size_t required_band_crossings = 0;
  std::optional<DisplacementReport> displacements;
  std::optional<ClosedLoopChecks> closed_loop;
  Real min_step = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> failures;  ///< unmet instance thresholds

  bool passed() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

/// Oscillating when events cover every window start, converged when there
/// are none, inconclusive otherwise.
Verdict verdict_of(const NonCauchyReport& r);

/// Certificate of a run of `inst` against its expected thresholds.
Certificate certify(const Instance& inst, const Trajectory& traj, const Real& L, const Real& f_min);

}  // namespace fwlab
