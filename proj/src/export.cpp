#include "collective/export.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace collective {

namespace {

struct Row {
  std::int64_t t;
  int elem_id;
  int colour_id;
  std::string arc_head;
  std::string dir;
  bool turned;
  std::vector<std::string> x;
};

std::vector<Row> trace_rows(const Trace& trace) {
  const Environment& env = trace.environment();
  std::vector<Row> rows;
  for (const auto& tr : trace.tracks()) {
    for (std::int64_t t = 0; t <= trace.horizon(); ++t) {
      Row row{t,
              tr.elem_id,
              static_cast<int>(tr.colour + 1),
              env.reduce(tr.heads[t]).to_string(),
              env.directions().name(tr.dirs[t]),
              static_cast<bool>(tr.turned[t]),
              {}};
      for (double x : env.euclidean_position(trace.tail(tr.elem_id, t))) row.x.push_back(format_real(x));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trace_header(std::size_t n) {
  std::string header = "t,elem_id,colour,arc_head,dir,turned";
  for (std::size_t k = 1; k <= n; ++k) header += ",x_euclid_" + std::to_string(k);
  return header;
}

}  // namespace

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << trace_header(trace.environment().dimension()) << '\n';
  for (const auto& row : trace_rows(trace)) {
    out << row.t << ',' << row.elem_id << ',' << row.colour_id << ',' << row.arc_head << ','
        << row.dir << ',' << (row.turned ? 1 : 0);
    for (const auto& x : row.x) out << ',' << x;
    out << '\n';
  }
}

void write_events_jsonl(std::ostream& out, const Trace& trace) {
  for (const auto& row : trace_rows(trace)) {
    nlohmann::ordered_json obj;
    obj["t"] = row.t;
    obj["elem_id"] = row.elem_id;
    obj["colour"] = row.colour_id;
    obj["arc_head"] = row.arc_head;
    obj["dir"] = row.dir;
    obj["turned"] = row.turned ? 1 : 0;
    std::vector<double> x;
    for (const auto& s : row.x) x.push_back(std::stod(s));
    obj["x_euclid"] = x;
    out << obj.dump() << '\n';
  }
}

void write_kinematics_csv(std::ostream& out, const Trace& trace, const Body& body) {
  out << "t,body,xB,vB,changed_state,codirected\n";
  for (const auto& row : kinematics(trace, body)) {
    out << row.t << ',' << body.name << ',' << join_rationals(row.position) << ','
        << join_rationals(row.velocity) << ',' << (row.changed_state ? 1 : 0) << ','
        << (row.codirected ? 1 : 0) << '\n';
  }
}

void write_spacetime_svg(std::ostream& out, const Trace& trace, bool timestamp) {
  const Environment& env = trace.environment();
  if (env.dimension() != 1) throw std::invalid_argument("spacetime diagrams need a one-dimensional trace");
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  constexpr double scale = 20.0;
  constexpr double margin = 20.0;

  double x_min = 0, x_max = 0;
  bool first = true;
  std::vector<std::vector<double>> xs;
  for (const auto& tr : trace.tracks()) {
    std::vector<double> line;
    for (std::int64_t t = 0; t <= trace.horizon(); ++t) {
      const double x = env.euclidean_position(trace.tail(tr.elem_id, t))[0];
      x_min = first ? x : std::min(x_min, x);
      x_max = first ? x : std::max(x_max, x);
      first = false;
      line.push_back(x);
    }
    xs.push_back(std::move(line));
  }
  const double width = (x_max - x_min) * scale + 2 * margin;
  const double height = double(trace.horizon()) * scale + 2 * margin;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_real(width) << "\" height=\""
      << format_real(height) << "\" viewBox=\"0 0 " << format_real(width) << ' ' << format_real(height)
      << "\">\n";
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "<!-- generated " << buf << " -->\n";
  }
  out << "<g fill=\"none\" stroke-width=\"2\">\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& tr = trace.tracks()[i];
    out << "<polyline data-elem=\"" << tr.elem_id << "\" stroke=\"" << palette[tr.colour % 8]
        << "\" points=\"";
    for (std::size_t t = 0; t < xs[i].size(); ++t) {
      if (t) out << ' ';
      out << format_real(margin + (xs[i][t] - x_min) * scale) << ','
          << format_real(margin + double(t) * scale);
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

TraceVerification verify_trace_csv(const Scenario& scenario, std::istream& csv) {
  TraceVerification result;
  const Environment& env = scenario.environment();
  const std::size_t n = env.dimension();
  std::string line;
  if (!std::getline(csv, line) || line != trace_header(n)) {
    result.problems.push_back("header mismatch");
    return result;
  }
  std::map<int, std::vector<std::vector<std::string>>> by_elem;
  std::size_t line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != 6 + n) {
      result.problems.push_back("line " + std::to_string(line_no) + ": expected " + std::to_string(6 + n) +
                                " columns");
      continue;
    }
    by_elem[std::stoi(cells[1])].push_back(std::move(cells));
  }
  if (!result.ok()) return result;
  if (by_elem.empty()) {
    result.problems.push_back("trace has no rows");
    return result;
  }

  const std::int64_t horizon = static_cast<std::int64_t>(by_elem.begin()->second.size()) - 1;
  if (horizon < 1) {
    result.problems.push_back("trace shorter than one step");
    return result;
  }
  std::map<int, const PopulationEntry*> initial;
  for (const auto& p : scenario.population) initial[p.id] = &p;

  for (const auto& [id, rows] : by_elem) {
    const std::string who = "elem " + std::to_string(id);
    const auto init = initial.find(id);
    if (init == initial.end()) {
      result.problems.push_back(who + ": not in scenario");
      continue;
    }
    if (static_cast<std::int64_t>(rows.size()) != horizon + 1) {
      result.problems.push_back(who + ": row count differs from other elements");
      continue;
    }
    std::vector<DirIndex> dirs;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (std::stoll(rows[t][0]) != static_cast<std::int64_t>(t)) {
        result.problems.push_back(who + ": rows not ordered by t");
      }
      const auto d = env.directions().find(rows[t][4]);
      if (!d) {
        result.problems.push_back(who + ": unknown direction '" + rows[t][4] + "'");
        break;
      }
      dirs.push_back(*d);
    }
    if (dirs.size() != rows.size()) continue;
    if (dirs.front() != init->second->dir) result.problems.push_back(who + ": initial direction differs");
    const auto heads = reconstruct_heads(env, init->second->head, dirs);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (env.reduce(heads[t]).to_string() != rows[t][3]) {
        result.problems.push_back(who + " t=" + std::to_string(t) + ": arc_head not reconstructible");
      }
      if (t + 1 < rows.size() && (rows[t][5] == "1") != (dirs[t + 1] != dirs[t])) {
        result.problems.push_back(who + " t=" + std::to_string(t) + ": turn flag inconsistent");
      }
    }
  }
  if (!result.ok()) return result;

  // Re-simulate and compare every row, including the lookahead flag at the horizon.
  std::stringstream expected;
  write_trace_csv(expected, run(scenario.initial_state(), horizon));
  std::getline(expected, line);
  for (const auto& [id, rows] : by_elem) {
    for (const auto& cells : rows) {
      if (!std::getline(expected, line)) {
        result.problems.push_back("trace has more rows than the simulation");
        return result;
      }
      std::string joined;
      for (std::size_t i = 0; i < cells.size(); ++i) joined += (i ? "," : "") + cells[i];
      if (joined != line) {
        result.problems.push_back("elem " + std::to_string(id) + " t=" + cells[0] + ": differs from simulation");
      }
    }
  }
  return result;
}

}  // namespace collective
