#ifndef COLLECTIVE_ISOMORPHISM_HPP
#define COLLECTIVE_ISOMORPHISM_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "collective/bodies.hpp"
#include "collective/frames.hpp"

namespace collective {

/// Inertial frame attached to a periodic body. The origin is the event on the
/// body's mean worldline at the start t0 of its periodic regime; own-frame
/// time there is zero.
struct BodyFrame {
  PeriodicityCertificate certificate;
  ProperTimeAssignment proper_time;
  MotionParams motion;       // v = displacement / P, w = proper-time rate
  FrameMap to_absolute;      // own frame -> absolute frame
  FrameMap to_body;          // absolute frame -> own frame
  RationalVector origin;     // absolute event (x, t)
};

/// Throws FrameError for a turn-free (w = 0) body.
BodyFrame body_frame(const Trace& trace, const Body& body, const ActualBasis& basis,
                     const PeriodicityCertificate& certificate, const Rational& tau_per_period);

/// As above, detecting the period first. Throws std::invalid_argument when
/// the body is not periodic within the horizon.
BodyFrame body_frame(const Trace& trace, const Body& body, const ActualBasis& basis,
                     const Rational& tau_per_period, PeriodSearch search = {});

struct OwnFrameEntry {
  int elem_id = 0;
  ColourIndex colour = 0;
  RationalVector point;
};

struct OwnFrameSnapshot {
  Rational tau;
  std::vector<OwnFrameEntry> entries;  // ordered by elem_id
};

/// Own-frame times [lo, hi] at which every member's transformed worldline
/// (restricted to the periodic regime) is defined.
std::pair<Rational, Rational> own_frame_coverage(const Trace& trace, const Body& body,
                                                 const BodyFrame& frame);

/// Members' positions on the own-frame slice at time tau. Throws
/// std::out_of_range outside own_frame_coverage.
OwnFrameSnapshot own_frame_snapshot(const Trace& trace, const Body& body, const BodyFrame& frame,
                                    const Rational& tau);

/// Snapshot of member positions in the absolute frame at integer time t.
OwnFrameSnapshot absolute_snapshot(const Trace& trace, const Body& body, std::int64_t t);

/// Sorted (colour, position - least position) entries, e.g. "1:0;2:2".
std::string internal_state_key(const OwnFrameSnapshot& snapshot);

struct IsoWitness {
  std::vector<std::pair<int, int>> phi;  // (member of A, member of B), sorted by A id
  Rational tau_a;
  Rational tau_b;
};

struct IsoSearch {
  Rational tau_per_period_a = 1;
  Rational tau_per_period_b = 1;
  PeriodSearch period;
  BasisConvention convention = BasisConvention::Normative;
};

/// Lexicographically first (tau_a, tau_b) over one period of each body at
/// which the own-frame snapshots coincide under a colour-preserving
/// bijection. Between breakpoints every member moves linearly, so each pair
/// of segments and bijection reduces to an exact linear system in
/// (tau_a, tau_b); coincidences away from breakpoints are found as well.
std::optional<IsoWitness> affine_isomorphic(const Trace& trace_a, const Body& body_a,
                                            const Trace& trace_b, const Body& body_b,
                                            const IsoSearch& search = {});

struct ExternalState {
  RationalVector velocity;
  std::optional<std::string> internal_key;  // nullopt: degenerate (w = 0)
};

/// Velocity at t paired with the internal key at the matching proper time.
/// Throws std::invalid_argument for aperiodic bodies and std::out_of_range
/// for t before the periodic regime.
ExternalState external_state(const Trace& trace, const Body& body, std::int64_t t,
                             const Rational& tau_per_period = 1,
                             BasisConvention convention = BasisConvention::Normative);

}  // namespace collective

#endif  // COLLECTIVE_ISOMORPHISM_HPP
