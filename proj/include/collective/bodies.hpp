#ifndef COLLECTIVE_BODIES_HPP
#define COLLECTIVE_BODIES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collective/engine.hpp"
#include "collective/rational.hpp"

namespace collective {

/// Finite set of elementary bodies. Bodies may overlap.
struct Body {
  std::string name;
  std::vector<int> members;
};

/// Throws std::out_of_range for an empty body or a member missing from the trace.
void check_body(const Trace& trace, const Body& body);

/// Mean of member positions at integer time t.
RationalVector avg_position(const Trace& trace, const Body& body, std::int64_t t);

/// x_B(t+1) - x_B(t). Requires t+1 <= horizon.
RationalVector velocity(const Trace& trace, const Body& body, std::int64_t t);

/// Some member turns at t.
bool changes_external_state(const Trace& trace, const Body& body, std::int64_t t);

/// All members share one direction at t.
bool all_codirected(const Trace& trace, const Body& body, std::int64_t t);

/// Euclidean norm of the embedded velocity.
double embedded_speed(const Trace& trace, const Body& body, std::int64_t t);

struct SnapshotEntry {
  ColourIndex colour = 0;
  IntVector position;
  DirIndex dir = 0;

  auto operator<=>(const SnapshotEntry&) const = default;
};

/// Sorted multiset of (colour, unwrapped position, direction).
using ExternalSnapshot = std::vector<SnapshotEntry>;

ExternalSnapshot external_snapshot(const Trace& trace, const Body& body, std::int64_t t);

/// Shift count k such that moving every element of `a` k steps along its own
/// direction yields `b`; negative k advances `b` instead. Among several
/// witnesses the one with the smallest |k| (then the smaller k) is returned.
/// Default bound: four times the snapshot diameter.
std::optional<std::int64_t> same_external_state(const Environment& env, const ExternalSnapshot& a,
                                                const ExternalSnapshot& b,
                                                std::optional<std::int64_t> k_max = std::nullopt);

struct PeriodicityCertificate {
  std::int64_t t0 = 0;
  std::int64_t period = 1;
  IntVector displacement;            // lattice vector added per period
  std::int64_t turns_per_period = 0; // member turn events in [t0, t0+P)
};

struct PeriodSearch {
  std::int64_t max_period = 0;  // 0 means horizon / 2
};

/// Smallest phase t0, then smallest period P, such that the member
/// configuration at t+P equals the one at t translated by a constant
/// displacement for every t in [t0, horizon-P], with at least two full
/// periods observed.
std::optional<PeriodicityCertificate> detect_period(const Trace& trace, const Body& body,
                                                    PeriodSearch search = {});

bool verify_certificate(const Trace& trace, const Body& body, const PeriodicityCertificate& cert);

struct ProperTimeAssignment {
  Rational tau_per_period;
  Rational rate;  // w_B; zero marks a turn-free (degenerate) body
  std::int64_t t0 = 0;
  std::int64_t period = 1;

  bool degenerate() const { return rate == 0; }
  /// Proper time at absolute time t >= t0, with tau(t0) = 0.
  Rational proper_time(const Rational& t) const { return rate * (t - t0); }
};

/// w_B = tau_per_period / P, or the degenerate assignment when the period
/// has no turns. Throws std::invalid_argument for tau_per_period <= 0.
ProperTimeAssignment assign_proper_time(const PeriodicityCertificate& cert,
                                        const Rational& tau_per_period);

struct KinematicsRow {
  std::int64_t t = 0;
  RationalVector position;
  RationalVector velocity;
  bool changed_state = false;
  bool codirected = false;
};

/// One row per t in [0, horizon).
std::vector<KinematicsRow> kinematics(const Trace& trace, const Body& body);

}  // namespace collective

#endif  // COLLECTIVE_BODIES_HPP
