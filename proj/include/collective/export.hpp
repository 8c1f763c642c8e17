#ifndef COLLECTIVE_EXPORT_HPP
#define COLLECTIVE_EXPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "collective/bodies.hpp"
#include "collective/engine.hpp"
#include "collective/scenario.hpp"

namespace collective {

/// "%.12g" without negative zero.
std::string format_real(double value);

/// Columns: t, elem_id, colour, arc_head, dir, turned, x_euclid_1..n.
/// Rows ordered by elem_id, then t. x_euclid is the unwrapped position at t.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Same fields as the CSV, one JSON object per line, same order.
void write_events_jsonl(std::ostream& out, const Trace& trace);

/// Columns: t, body, xB, vB, changed_state, codirected.
void write_kinematics_csv(std::ostream& out, const Trace& trace, const Body& body);

/// Spacetime diagram for one-dimensional traces: x to the right, t downward.
void write_spacetime_svg(std::ostream& out, const Trace& trace, bool timestamp = true);

struct TraceVerification {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Checks a trace CSV against its scenario: arcs rebuilt from the initial
/// placement and the direction column, turn flags consistent with the
/// directions, and both reproduced by re-simulation.
TraceVerification verify_trace_csv(const Scenario& scenario, std::istream& csv);

}  // namespace collective

#endif  // COLLECTIVE_EXPORT_HPP
