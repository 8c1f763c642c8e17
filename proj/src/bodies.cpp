#include "collective/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace collective {

namespace {

void check_time(const Trace& trace, std::int64_t t) {
  if (t < 0 || t > trace.horizon()) throw std::out_of_range("time outside trace horizon");
}

struct RelativeConfiguration {
  IntVector least;
  ExternalSnapshot shape;  // positions relative to `least`
};

RelativeConfiguration relative_configuration(const Trace& trace, const Body& body, std::int64_t t) {
  ExternalSnapshot snap = external_snapshot(trace, body, t);
  IntVector least = snap.front().position;
  for (const auto& e : snap) least = std::min(least, e.position);
  for (auto& e : snap) {
    for (std::size_t k = 0; k < least.size(); ++k) e.position[k] -= least[k];
  }
  std::sort(snap.begin(), snap.end());
  return {std::move(least), std::move(snap)};
}

IntVector difference(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

}  // namespace

void check_body(const Trace& trace, const Body& body) {
  if (body.members.empty()) throw std::out_of_range("body '" + body.name + "' has no members");
  std::vector<int> ids = body.members;
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw std::out_of_range("body '" + body.name + "' lists a member twice");
  }
  for (int id : body.members) {
    if (!trace.contains(id)) {
      throw std::out_of_range("body '" + body.name + "': unknown member " + std::to_string(id));
    }
  }
}

RationalVector avg_position(const Trace& trace, const Body& body, std::int64_t t) {
  check_body(trace, body);
  check_time(trace, t);
  RationalVector sum = zero_vector(trace.environment().dimension());
  for (int id : body.members) {
    const IntVector p = trace.position(id, t);
    for (std::size_t k = 0; k < p.size(); ++k) sum[k] += static_cast<long>(p[k]);
  }
  return Rational(1, static_cast<unsigned long>(body.members.size())) * sum;
}

RationalVector velocity(const Trace& trace, const Body& body, std::int64_t t) {
  if (t + 1 > trace.horizon()) throw std::out_of_range("velocity needs t+1 within the horizon");
  return avg_position(trace, body, t + 1) - avg_position(trace, body, t);
}

bool changes_external_state(const Trace& trace, const Body& body, std::int64_t t) {
  check_body(trace, body);
  check_time(trace, t);
  return std::any_of(body.members.begin(), body.members.end(),
                     [&](int id) { return trace.track(id).turned[t]; });
}

bool all_codirected(const Trace& trace, const Body& body, std::int64_t t) {
  check_body(trace, body);
  check_time(trace, t);
  const DirIndex first = trace.track(body.members.front()).dirs[t];
  return std::all_of(body.members.begin(), body.members.end(),
                     [&](int id) { return trace.track(id).dirs[t] == first; });
}

double embedded_speed(const Trace& trace, const Body& body, std::int64_t t) {
  const auto e = trace.environment().euclidean_of_point(velocity(trace, body, t));
  double sq = 0;
  for (double x : e) sq += x * x;
  return std::sqrt(sq);
}

ExternalSnapshot external_snapshot(const Trace& trace, const Body& body, std::int64_t t) {
  check_body(trace, body);
  check_time(trace, t);
  ExternalSnapshot snap;
  snap.reserve(body.members.size());
  for (int id : body.members) {
    const auto& tr = trace.track(id);
    snap.push_back({tr.colour, trace.position(id, t), tr.dirs[t]});
  }
  std::sort(snap.begin(), snap.end());
  return snap;
}

std::optional<std::int64_t> same_external_state(const Environment& env, const ExternalSnapshot& a,
                                                const ExternalSnapshot& b,
                                                std::optional<std::int64_t> k_max) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.empty()) return 0;
  ExternalSnapshot sorted_b = b;
  std::sort(sorted_b.begin(), sorted_b.end());

  std::int64_t bound = 0;
  if (k_max) {
    bound = *k_max;
  } else {
    std::int64_t diameter = 1;
    for (const auto* s : {&a, &b}) {
      for (const auto* t : {&a, &b}) {
        for (const auto& x : *s) {
          for (const auto& y : *t) {
            for (std::size_t k = 0; k < x.position.size(); ++k) {
              diameter = std::max<std::int64_t>(diameter, std::llabs(x.position[k] - y.position[k]));
            }
          }
        }
      }
    }
    bound = 4 * diameter;
  }

  // k is pinned by where the first element of `a` can land.
  const SnapshotEntry& anchor = a.front();
  const IntVector& v = env.directions().vector(anchor.dir);
  std::vector<std::int64_t> candidates;
  for (const auto& target : sorted_b) {
    if (target.colour != anchor.colour || target.dir != anchor.dir) continue;
    const IntVector diff = difference(target.position, anchor.position);
    std::optional<std::int64_t> k;
    bool consistent = true;
    for (std::size_t j = 0; j < v.size() && consistent; ++j) {
      if (v[j] == 0) {
        consistent = diff[j] == 0;
      } else if (diff[j] % v[j] != 0) {
        consistent = false;
      } else if (!k) {
        k = diff[j] / v[j];
      } else {
        consistent = *k == diff[j] / v[j];
      }
    }
    if (consistent && k && std::llabs(*k) <= bound) candidates.push_back(*k);
  }
  std::sort(candidates.begin(), candidates.end(), [](auto x, auto y) {
    return std::llabs(x) != std::llabs(y) ? std::llabs(x) < std::llabs(y) : x < y;
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (std::int64_t k : candidates) {
    ExternalSnapshot shifted = a;
    for (auto& e : shifted) {
      const IntVector& dv = env.directions().vector(e.dir);
      for (std::size_t j = 0; j < dv.size(); ++j) e.position[j] += k * dv[j];
    }
    std::sort(shifted.begin(), shifted.end());
    if (shifted == sorted_b) return k;
  }
  return std::nullopt;
}

std::optional<PeriodicityCertificate> detect_period(const Trace& trace, const Body& body,
                                                    PeriodSearch search) {
  check_body(trace, body);
  const std::int64_t horizon = trace.horizon();
  const std::int64_t max_period = search.max_period > 0 ? std::min(search.max_period, horizon / 2)
                                                        : horizon / 2;
  if (max_period < 1) return std::nullopt;

  // Intern each relative configuration so comparisons are integer compares.
  std::map<ExternalSnapshot, std::int64_t> ids;
  std::vector<std::int64_t> shape_id(horizon + 1);
  std::vector<IntVector> least(horizon + 1);
  for (std::int64_t t = 0; t <= horizon; ++t) {
    auto rc = relative_configuration(trace, body, t);
    shape_id[t] = ids.emplace(std::move(rc.shape), static_cast<std::int64_t>(ids.size())).first->second;
    least[t] = std::move(rc.least);
  }

  std::optional<PeriodicityCertificate> best;
  for (std::int64_t p = 1; p <= max_period; ++p) {
    const std::int64_t last = horizon - p;
    const IntVector delta = difference(least[last + p], least[last]);
    std::int64_t t0 = last + 1;
    while (t0 > 0) {
      const std::int64_t t = t0 - 1;
      if (shape_id[t + p] != shape_id[t]) break;
      if (difference(least[t + p], least[t]) != delta) break;
      t0 = t;
    }
    if (t0 > last || horizon - t0 < 2 * p) continue;
    if (!best || t0 < best->t0) best = PeriodicityCertificate{t0, p, delta, 0};
    if (best->t0 == 0) break;
  }
  if (best) {
    for (std::int64_t t = best->t0; t < best->t0 + best->period; ++t) {
      for (int id : body.members) best->turns_per_period += trace.track(id).turned[t] ? 1 : 0;
    }
  }
  return best;
}

bool verify_certificate(const Trace& trace, const Body& body, const PeriodicityCertificate& cert) {
  if (cert.period < 1 || cert.t0 < 0 || cert.t0 + cert.period > trace.horizon()) return false;
  for (std::int64_t t = cert.t0; t + cert.period <= trace.horizon(); ++t) {
    ExternalSnapshot shifted = external_snapshot(trace, body, t);
    for (auto& e : shifted) {
      for (std::size_t k = 0; k < e.position.size(); ++k) e.position[k] += cert.displacement[k];
    }
    std::sort(shifted.begin(), shifted.end());
    if (shifted != external_snapshot(trace, body, t + cert.period)) return false;
  }
  return true;
}

ProperTimeAssignment assign_proper_time(const PeriodicityCertificate& cert,
                                        const Rational& tau_per_period) {
  if (tau_per_period <= 0) throw std::invalid_argument("tau_per_period must be positive");
  if (cert.period < 1) throw std::invalid_argument("certificate period must be positive");
  ProperTimeAssignment out{tau_per_period, Rational(0), cert.t0, cert.period};
  if (cert.turns_per_period > 0) out.rate = tau_per_period / Rational(static_cast<long>(cert.period));
  return out;
}

std::vector<KinematicsRow> kinematics(const Trace& trace, const Body& body) {
  check_body(trace, body);
  std::vector<KinematicsRow> rows;
  rows.reserve(trace.horizon());
  RationalVector next = avg_position(trace, body, 0);
  for (std::int64_t t = 0; t < trace.horizon(); ++t) {
    RationalVector here = std::move(next);
    next = avg_position(trace, body, t + 1);
    rows.push_back({t, here, next - here, changes_external_state(trace, body, t),
                    all_codirected(trace, body, t)});
  }
  return rows;
}

}  // namespace collective
