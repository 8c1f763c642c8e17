#include "collective/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <stdexcept>

namespace collective {

namespace {

// Member worldlines mapped into a body's own frame, one event per integer
// absolute time of the periodic regime.
struct OwnWorldlines {
  std::vector<int> ids;
  std::vector<ColourIndex> colours;
  std::vector<std::vector<RationalVector>> events;
};

std::vector<int> sorted_members(const Body& body) {
  std::vector<int> ids = body.members;
  std::sort(ids.begin(), ids.end());
  return ids;
}

OwnWorldlines transform_worldlines(const Trace& trace, const Body& body, const BodyFrame& frame) {
  check_body(trace, body);
  const Environment& env = trace.environment();
  const std::size_t n = env.dimension();
  OwnWorldlines out;
  out.ids = sorted_members(body);
  for (int id : out.ids) {
    out.colours.push_back(trace.track(id).colour);
    std::vector<RationalVector> events;
    events.reserve(trace.horizon() - frame.certificate.t0 + 1);
    for (std::int64_t t = frame.certificate.t0; t <= trace.horizon(); ++t) {
      RationalVector event = env.rational_point(trace.tail(id, t));
      event.emplace_back(static_cast<long>(t));
      for (std::size_t k = 0; k <= n; ++k) event[k] -= frame.origin[k];
      events.push_back(frame.to_body.matrix * event);
    }
    out.events.push_back(std::move(events));
  }
  return out;
}

std::pair<Rational, Rational> coverage(const OwnWorldlines& lines) {
  Rational lo = lines.events.front().front().back();
  Rational hi = lines.events.front().back().back();
  for (const auto& ev : lines.events) {
    lo = std::max(lo, Rational(ev.front().back()));
    hi = std::min(hi, Rational(ev.back().back()));
  }
  return {lo, hi};
}

// Point of a transformed worldline at own-frame time tau. Own-frame time is
// strictly increasing along every worldline.
RationalVector sample(const std::vector<RationalVector>& events, const Rational& tau) {
  const auto it = std::lower_bound(events.begin(), events.end(), tau,
                                   [](const RationalVector& e, const Rational& x) { return e.back() < x; });
  if (it == events.end()) throw std::out_of_range("own-frame time beyond worldline");
  RationalVector point;
  if (it->back() == tau) {
    point = *it;
  } else {
    if (it == events.begin()) throw std::out_of_range("own-frame time before worldline");
    const RationalVector& a = *(it - 1);
    const RationalVector& b = *it;
    const Rational mu = (tau - a.back()) / (b.back() - a.back());
    point = a + mu * (b - a);
  }
  point.pop_back();
  return point;
}

OwnFrameSnapshot snapshot_from(const OwnWorldlines& lines, const Rational& tau) {
  OwnFrameSnapshot snap{tau, {}};
  for (std::size_t i = 0; i < lines.ids.size(); ++i) {
    snap.entries.push_back({lines.ids[i], lines.colours[i], sample(lines.events[i], tau)});
  }
  return snap;
}

std::vector<Rational> breakpoints_in(const OwnWorldlines& lines, const Rational& lo, const Rational& hi) {
  std::set<Rational> times{lo};
  for (const auto& ev : lines.events) {
    for (const auto& e : ev) {
      if (e.back() >= lo && e.back() < hi) times.insert(e.back());
    }
  }
  return {times.begin(), times.end()};
}

std::vector<ColourIndex> colour_multiset(const Trace& trace, const Body& body) {
  std::vector<ColourIndex> colours;
  for (int id : body.members) colours.push_back(trace.track(id).colour);
  std::sort(colours.begin(), colours.end());
  return colours;
}

// Stretch of own-frame time on which every member moves linearly.
struct Segment {
  Rational start;
  Rational length;
  std::vector<RationalVector> position;  // at start, per member
  std::vector<RationalVector> velocity;  // own-frame, per member
};

std::vector<Segment> segments_in(const OwnWorldlines& lines, const Rational& lo, const Rational& hi) {
  std::vector<Rational> cuts = breakpoints_in(lines, lo, hi);
  cuts.push_back(hi);
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment seg{cuts[i], cuts[i + 1] - cuts[i], {}, {}};
    for (const auto& ev : lines.events) {
      RationalVector a = sample(ev, cuts[i]);
      RationalVector b = sample(ev, cuts[i + 1]);
      seg.velocity.push_back((1 / seg.length) * (b - a));
      seg.position.push_back(std::move(a));
    }
    out.push_back(std::move(seg));
  }
  if (out.empty()) {
    // zero-length window: a single instant
    Segment seg{lo, 0, {}, {}};
    for (const auto& ev : lines.events) {
      seg.position.push_back(sample(ev, lo));
      seg.velocity.push_back(zero_vector(seg.position.back().size()));
    }
    out.push_back(std::move(seg));
  }
  return out;
}

// Row a*x + b*y = c of the coincidence system.
struct Row {
  Rational a, b, c;
};

// Lexicographically least (x, y) in [0, lx] x [0, ly] solving every row.
std::optional<std::pair<Rational, Rational>> least_solution(const std::vector<Row>& rows, const Rational& lx,
                                                            const Rational& ly) {
  const auto in_box = [&](const Rational& x, const Rational& y) {
    return x >= 0 && x <= lx && y >= 0 && y <= ly;
  };
  const Row* pivot = nullptr;
  for (const auto& r : rows) {
    if (r.a != 0 || r.b != 0) {
      pivot = &r;
      break;
    }
    if (r.c != 0) return std::nullopt;
  }
  if (!pivot) return std::pair<Rational, Rational>{0, 0};

  for (const auto& r : rows) {
    const Rational det = pivot->a * r.b - r.a * pivot->b;
    if (det != 0) {
      const Rational x = (r.b * pivot->c - pivot->b * r.c) / det;
      const Rational y = (pivot->a * r.c - r.a * pivot->c) / det;
      for (const auto& q : rows) {
        if (q.a * x + q.b * y != q.c) return std::nullopt;
      }
      if (!in_box(x, y)) return std::nullopt;
      return std::pair<Rational, Rational>{x, y};
    }
    if (pivot->a * r.c != r.a * pivot->c || pivot->b * r.c != r.b * pivot->c) return std::nullopt;
  }

  // every row is a multiple of the pivot: a line
  const Rational& a = pivot->a;
  const Rational& b = pivot->b;
  const Rational& c = pivot->c;
  if (b == 0) {
    const Rational x = c / a;
    if (!in_box(x, 0)) return std::nullopt;
    return std::pair<Rational, Rational>{x, 0};
  }
  if (a == 0) {
    const Rational y = c / b;
    if (!in_box(0, y)) return std::nullopt;
    return std::pair<Rational, Rational>{0, y};
  }
  const Rational x_at_bottom = c / a;
  const Rational x_at_top = (c - b * ly) / a;
  const Rational lo = std::max(Rational(0), std::min(x_at_bottom, x_at_top));
  const Rational hi = std::min(lx, std::max(x_at_bottom, x_at_top));
  if (lo > hi) return std::nullopt;
  return std::pair<Rational, Rational>{lo, (c - a * lo) / b};
}

// Every colour-preserving bijection from A's members to B's, as index maps,
// in lexicographic order.
std::vector<std::vector<std::size_t>> bijections(const std::vector<ColourIndex>& colours_a,
                                                 const std::vector<ColourIndex>& colours_b) {
  std::map<ColourIndex, std::vector<std::size_t>> slots_a, slots_b;
  for (std::size_t i = 0; i < colours_a.size(); ++i) slots_a[colours_a[i]].push_back(i);
  for (std::size_t j = 0; j < colours_b.size(); ++j) slots_b[colours_b[j]].push_back(j);

  std::vector<std::vector<std::size_t>> out{std::vector<std::size_t>(colours_a.size())};
  for (const auto& [colour, from] : slots_a) {
    std::vector<std::size_t> to = slots_b.at(colour);
    std::vector<std::vector<std::size_t>> next;
    do {
      for (auto partial : out) {
        for (std::size_t k = 0; k < from.size(); ++k) partial[from[k]] = to[k];
        next.push_back(std::move(partial));
      }
    } while (std::next_permutation(to.begin(), to.end()));
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Coincidence {
  Rational tau_a, tau_b;
  std::vector<std::size_t> map;
};

// Earliest coincidence with tau_a inside segment `sa`.
std::optional<Coincidence> first_in_segment(const Segment& sa, const std::vector<Segment>& segs_b,
                                            const std::vector<std::vector<std::size_t>>& maps) {
  std::optional<Coincidence> best;
  std::vector<Row> rows;
  for (const auto& sb : segs_b) {
    if (best && best->tau_b <= sb.start && best->tau_a == sa.start) break;
    for (const auto& map : maps) {
      rows.clear();
      for (std::size_t i = 0; i < map.size(); ++i) {
        const std::size_t j = map[i];
        for (std::size_t k = 0; k < sa.position[i].size(); ++k) {
          rows.push_back({sa.velocity[i][k], -sb.velocity[j][k], sb.position[j][k] - sa.position[i][k]});
        }
      }
      const auto sol = least_solution(rows, sa.length, sb.length);
      if (!sol) continue;
      Coincidence c{sa.start + sol->first, sb.start + sol->second, map};
      if (!best || std::tie(c.tau_a, c.tau_b) < std::tie(best->tau_a, best->tau_b)) best = std::move(c);
    }
  }
  return best;
}

}  // namespace

BodyFrame body_frame(const Trace& trace, const Body& body, const ActualBasis& basis,
                     const PeriodicityCertificate& certificate, const Rational& tau_per_period) {
  check_body(trace, body);
  const ProperTimeAssignment pt = assign_proper_time(certificate, tau_per_period);
  if (pt.degenerate()) throw FrameError("degenerate frame (zero proper-time velocity)");
  const std::size_t n = trace.environment().dimension();
  if (basis.dimension() != n) throw std::invalid_argument("basis dimension does not match trace");

  const Rational period(static_cast<long>(certificate.period));
  RationalVector v;
  for (auto d : certificate.displacement) v.push_back(Rational(static_cast<long>(d)) / period);
  const MotionParams motion{v, pt.rate};
  const DiagonalBoost boost = lambda_from_motion(basis, motion);

  // Mean of x_B over one period lies on the mean worldline at its mid time.
  RationalVector mean = zero_vector(n);
  for (std::int64_t t = certificate.t0; t < certificate.t0 + certificate.period; ++t) {
    mean = mean + avg_position(trace, body, t);
  }
  mean = (1 / period) * mean;
  RationalVector origin = mean - ((period - 1) / 2) * v;
  origin.emplace_back(static_cast<long>(certificate.t0));

  return {certificate, pt, motion, frame_map(basis, boost), frame_map(basis, invert(boost)),
          std::move(origin)};
}

BodyFrame body_frame(const Trace& trace, const Body& body, const ActualBasis& basis,
                     const Rational& tau_per_period, PeriodSearch search) {
  const auto cert = detect_period(trace, body, search);
  if (!cert) throw std::invalid_argument("body '" + body.name + "' is not periodic within the horizon");
  return body_frame(trace, body, basis, *cert, tau_per_period);
}

std::pair<Rational, Rational> own_frame_coverage(const Trace& trace, const Body& body,
                                                 const BodyFrame& frame) {
  return coverage(transform_worldlines(trace, body, frame));
}

OwnFrameSnapshot own_frame_snapshot(const Trace& trace, const Body& body, const BodyFrame& frame,
                                    const Rational& tau) {
  const OwnWorldlines lines = transform_worldlines(trace, body, frame);
  const auto [lo, hi] = coverage(lines);
  if (tau < lo || tau > hi) {
    throw std::out_of_range("own-frame time " + format_rational(tau) + " outside coverage [" +
                            format_rational(lo) + ", " + format_rational(hi) + "]");
  }
  return snapshot_from(lines, tau);
}

OwnFrameSnapshot absolute_snapshot(const Trace& trace, const Body& body, std::int64_t t) {
  check_body(trace, body);
  OwnFrameSnapshot snap{Rational(static_cast<long>(t)), {}};
  for (int id : sorted_members(body)) {
    snap.entries.push_back({id, trace.track(id).colour,
                            trace.environment().rational_point(trace.tail(id, t))});
  }
  return snap;
}

std::string internal_state_key(const OwnFrameSnapshot& snapshot) {
  if (snapshot.entries.empty()) return "";
  RationalVector least = snapshot.entries.front().point;
  for (const auto& e : snapshot.entries) least = std::min(least, e.point);
  std::vector<std::pair<ColourIndex, RationalVector>> rel;
  for (const auto& e : snapshot.entries) rel.emplace_back(e.colour, e.point - least);
  std::sort(rel.begin(), rel.end());
  std::string key;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (i) key += ';';
    key += std::to_string(rel[i].first + 1) + ":" + join_rationals(rel[i].second, ',');
  }
  return key;
}

std::optional<IsoWitness> affine_isomorphic(const Trace& trace_a, const Body& body_a,
                                            const Trace& trace_b, const Body& body_b,
                                            const IsoSearch& search) {
  check_body(trace_a, body_a);
  check_body(trace_b, body_b);
  if (colour_multiset(trace_a, body_a) != colour_multiset(trace_b, body_b)) return std::nullopt;
  if (trace_a.environment().dimension() != trace_b.environment().dimension()) return std::nullopt;

  const auto basis_a = ActualBasis::build(trace_a.environment().directions(), search.convention);
  const auto basis_b = ActualBasis::build(trace_b.environment().directions(), search.convention);
  const BodyFrame frame_a = body_frame(trace_a, body_a, basis_a, search.tau_per_period_a, search.period);
  const BodyFrame frame_b = body_frame(trace_b, body_b, basis_b, search.tau_per_period_b, search.period);

  const auto window = [](const OwnWorldlines& lines, const Rational& span, const std::string& name) {
    const auto [lo, hi] = coverage(lines);
    if (lo + span > hi) {
      throw std::out_of_range("horizon too short to cover one own-frame period of '" + name + "'");
    }
    return segments_in(lines, lo, lo + span);
  };
  const OwnWorldlines lines_a = transform_worldlines(trace_a, body_a, frame_a);
  const OwnWorldlines lines_b = transform_worldlines(trace_b, body_b, frame_b);
  const auto segs_a = window(lines_a, search.tau_per_period_a, body_a.name);
  const auto segs_b = window(lines_b, search.tau_per_period_b, body_b.name);
  const auto maps = bijections(lines_a.colours, lines_b.colours);

  // Segments of A are independent; the answer is the first hit in A order.
  std::vector<std::optional<Coincidence>> hits(segs_a.size());
  const auto count = static_cast<std::int64_t>(segs_a.size());
#if defined(COLLECTIVE_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic) if (count > 8)
#endif
  for (std::int64_t i = 0; i < count; ++i) hits[i] = first_in_segment(segs_a[i], segs_b, maps);

  for (const auto& hit : hits) {
    if (!hit) continue;
    IsoWitness witness{{}, hit->tau_a, hit->tau_b};
    for (std::size_t i = 0; i < hit->map.size(); ++i) {
      witness.phi.emplace_back(lines_a.ids[i], lines_b.ids[hit->map[i]]);
    }
    return witness;
  }
  return std::nullopt;
}

ExternalState external_state(const Trace& trace, const Body& body, std::int64_t t,
                             const Rational& tau_per_period, BasisConvention convention) {
  ExternalState out{velocity(trace, body, t), std::nullopt};
  const auto cert = detect_period(trace, body);
  if (!cert) throw std::invalid_argument("body '" + body.name + "' is not periodic within the horizon");
  if (t < cert->t0) throw std::out_of_range("time precedes the periodic regime");
  const ProperTimeAssignment pt = assign_proper_time(*cert, tau_per_period);
  if (pt.degenerate()) return out;

  const auto basis = ActualBasis::build(trace.environment().directions(), convention);
  const BodyFrame frame = body_frame(trace, body, basis, *cert, tau_per_period);
  const OwnWorldlines lines = transform_worldlines(trace, body, frame);
  const auto [lo, hi] = coverage(lines);
  Rational tau = pt.proper_time(Rational(static_cast<long>(t)));
  // Own-frame snapshots repeat every tau_per_period; fold into the covered window.
  const Rational periods = (tau - lo) / tau_per_period;
  mpz_class whole = periods.get_num() / periods.get_den();
  if (Rational(whole) > periods) whole -= 1;
  tau -= Rational(whole) * tau_per_period;
  if (tau > hi) throw std::out_of_range("horizon too short to cover one own-frame period");
  out.internal_key = internal_state_key(snapshot_from(lines, tau));
  return out;
}

}  // namespace collective
