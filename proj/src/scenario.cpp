#include "collective/scenario.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace collective {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ScenarioError(path + ": " + message);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

std::int64_t as_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) fail(path, "expected an integer");
  return value.get<std::int64_t>();
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  return value.get<std::string>();
}

IntVector as_int_vector(const json& value, std::size_t size, const std::string& path) {
  if (!value.is_array() || value.size() != size) {
    fail(path, "expected an array of " + std::to_string(size) + " integers");
  }
  IntVector out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(as_int(value[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

DirIndex resolve_direction(const DirectionSet& dirs, const json& value, const std::string& path) {
  if (value.is_string()) {
    if (const auto d = dirs.find(value.get<std::string>())) return *d;
    fail(path, "unknown direction '" + value.get<std::string>() + "'");
  }
  if (value.is_number_integer()) {
    const auto id = value.get<std::int64_t>();
    if (id >= 1 && static_cast<std::size_t>(id) <= dirs.size()) return static_cast<DirIndex>(id - 1);
    fail(path, "direction id " + std::to_string(id) + " out of range");
  }
  fail(path, "expected a direction name or id");
}

struct ColourNames {
  std::map<std::string, ColourIndex> by_name;
  std::size_t count = 0;

  ColourIndex resolve(const json& value, const std::string& path) const {
    if (value.is_string()) {
      const auto it = by_name.find(value.get<std::string>());
      if (it == by_name.end()) fail(path, "unknown colour '" + value.get<std::string>() + "'");
      return it->second;
    }
    if (value.is_number_integer()) {
      const auto id = value.get<std::int64_t>();
      if (id < 1 || static_cast<std::size_t>(id) > count) {
        fail(path, "colour " + std::to_string(id) + " of " + std::to_string(count));
      }
      return static_cast<ColourIndex>(id - 1);
    }
    fail(path, "expected a colour name or id");
  }
};

Environment parse_environment(const json& env, const std::string& path) {
  const auto dim = as_int(require(env, "dimension", path), path + ".dimension");
  if (dim < 1) fail(path + ".dimension", "must be at least 1");
  const auto n = static_cast<std::size_t>(dim);

  std::optional<DirectionSet> dirs;
  try {
    if (const auto it = env.find("directions"); it != env.end()) {
      if (!it->is_array()) fail(path + ".directions", "expected an array");
      std::vector<Direction> list;
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string p = path + ".directions[" + std::to_string(i) + "]";
        list.push_back({as_string(require((*it)[i], "name", p), p + ".name"),
                        as_int_vector(require((*it)[i], "vector", p), n, p + ".vector")});
      }
      dirs.emplace(n, std::move(list));
    } else {
      dirs.emplace(standard_directions(n));
    }
  } catch (const std::invalid_argument& e) {
    fail(path + ".directions", e.what());
  }
  const auto report = check_actual_direction_count(*dirs);
  if (!report.ok()) fail(path + ".directions", report.summary());

  Topology topology;
  if (const auto it = env.find("topology"); it != env.end()) {
    const std::string p = path + ".topology";
    const std::string kind = as_string(require(*it, "kind", p), p + ".kind");
    if (kind == "torus") {
      if (const auto c = it->find("circumference"); c != it->end()) {
        if (n != 1) fail(p + ".circumference", "only valid for dimension 1; use basis");
        topology = Topology::ring(as_int(*c, p + ".circumference"));
      } else {
        const json& basis = require(*it, "basis", p);
        if (!basis.is_array() || basis.size() != n) fail(p + ".basis", "expected " + std::to_string(n) + " vectors");
        std::vector<IntVector> vectors;
        for (std::size_t i = 0; i < n; ++i) {
          vectors.push_back(as_int_vector(basis[i], n, p + ".basis[" + std::to_string(i) + "]"));
        }
        topology = Topology::torus(std::move(vectors));
      }
    } else if (kind != "infinite") {
      fail(p + ".kind", "expected 'infinite' or 'torus'");
    }
  }
  try {
    return Environment(std::move(*dirs), std::move(topology));
  } catch (const std::invalid_argument& e) {
    fail(path + ".topology", e.what());
  }
}

OutputRule parse_rule(const json& rule, const DirectionSet& dirs, const ColourNames& colours,
                      const std::string& path) {
  OutputRule out;
  out.fallback = resolve_direction(dirs, require(rule, "default", path), path + ".default");
  if (const auto it = rule.find("clauses"); it != rule.end()) {
    if (!it->is_array()) fail(path + ".clauses", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = path + ".clauses[" + std::to_string(i) + "]";
      const json& clause = (*it)[i];
      Clause c;
      c.output = resolve_direction(dirs, require(clause, "then", p), p + ".then");
      const json& when = require(clause, "when", p);
      if (!when.is_array()) fail(p + ".when", "expected an array of conditions");
      for (std::size_t j = 0; j < when.size(); ++j) {
        const std::string q = p + ".when[" + std::to_string(j) + "]";
        const json& atom = when[j];
        GuardAtom a;
        a.dir = resolve_direction(dirs, require(atom, "dir", q), q + ".dir");
        a.colour = colours.resolve(require(atom, "colour", q), q + ".colour");
        const bool has_at_least = atom.contains("at_least");
        const bool has_empty = atom.contains("empty");
        if (has_at_least == has_empty) fail(q, "exactly one of 'at_least' or 'empty' is required");
        if (has_at_least) {
          a.kind = GuardAtom::Kind::AtLeast;
          a.threshold = static_cast<int>(as_int(atom["at_least"], q + ".at_least"));
        } else {
          if (!atom["empty"].is_boolean() || !atom["empty"].get<bool>()) fail(q + ".empty", "must be true");
          a.kind = GuardAtom::Kind::Zero;
        }
        c.guard.push_back(a);
      }
      out.clauses.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

WorldState Scenario::initial_state() const {
  std::vector<InitialPlacement> placements;
  for (const auto& p : population) placements.push_back({p.id, p.colour, p.head, p.dir});
  return make_world(dynamics, std::move(placements));
}

const Body& Scenario::body(std::string_view name) const {
  for (const auto& b : bodies) {
    if (b.name == name) return b;
  }
  throw ScenarioError("bodies: no body named '" + std::string(name) + "'");
}

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("scenario", "expected a JSON object");

  Scenario sc;
  if (const auto it = root.find("name"); it != root.end()) sc.name = as_string(*it, "name");
  Environment env = parse_environment(require(root, "environment", "scenario"), "environment");
  const DirectionSet& dirs = env.directions();
  const std::size_t n = env.dimension();

  int cap = 3;
  if (const auto it = root.find("saturation_cap"); it != root.end()) {
    cap = static_cast<int>(as_int(*it, "saturation_cap"));
    if (cap < 1) fail("saturation_cap", "must be positive");
  }

  const json& colours_json = require(root, "colours", "scenario");
  if (!colours_json.is_array() || colours_json.empty()) fail("colours", "expected a non-empty array");
  ColourNames names;
  names.count = colours_json.size();
  for (std::size_t i = 0; i < colours_json.size(); ++i) {
    const std::string p = "colours[" + std::to_string(i) + "]";
    const std::string name = colours_json[i].contains("name")
                                 ? as_string(colours_json[i]["name"], p + ".name")
                                 : std::to_string(i + 1);
    if (!names.by_name.emplace(name, i).second) fail(p + ".name", "duplicate colour name '" + name + "'");
  }
  std::vector<Colour> colours;
  for (std::size_t i = 0; i < colours_json.size(); ++i) {
    const std::string p = "colours[" + std::to_string(i) + "]";
    const json& c = colours_json[i];
    Colour colour;
    colour.id = c.contains("id") ? static_cast<int>(as_int(c["id"], p + ".id")) : static_cast<int>(i + 1);
    if (colour.id != static_cast<int>(i + 1)) fail(p + ".id", "ids must be contiguous from 1 in file order");
    colour.name = c.contains("name") ? c["name"].get<std::string>() : std::to_string(i + 1);
    colour.rule = parse_rule(require(c, "rule", p), dirs, names, p + ".rule");
    colours.push_back(std::move(colour));
  }
  const auto colour_report = validate_colour_set(colours, env, cap);
  if (!colour_report.ok()) fail("colours", colour_report.summary());

  const json& pop = require(root, "population", "scenario");
  if (!pop.is_array()) fail("population", "expected an array");
  std::map<std::string, int> elem_by_name;
  std::set<int> elem_ids;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const std::string p = "population[" + std::to_string(i) + "]";
    const json& e = pop[i];
    PopulationEntry entry;
    entry.id = e.contains("id") ? static_cast<int>(as_int(e["id"], p + ".id")) : static_cast<int>(i + 1);
    if (!elem_ids.insert(entry.id).second) fail(p + ".id", "duplicate elem id " + std::to_string(entry.id));
    entry.name = e.contains("name") ? as_string(e["name"], p + ".name") : std::to_string(entry.id);
    if (e.contains("name") && !elem_by_name.emplace(entry.name, entry.id).second) {
      fail(p + ".name", "duplicate elem name '" + entry.name + "'");
    }
    entry.colour = names.resolve(require(e, "colour", p), p + ".colour");
    IntVector counts = as_int_vector(require(e, "head", p), n, p + ".head");
    counts.push_back(0);
    entry.head = LatticeCoord::from_counts(std::move(counts));
    entry.dir = resolve_direction(dirs, require(e, "dir", p), p + ".dir");
    sc.population.push_back(std::move(entry));
  }

  if (const auto it = root.find("bodies"); it != root.end()) {
    if (!it->is_array()) fail("bodies", "expected an array");
    std::set<std::string> body_names;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = "bodies[" + std::to_string(i) + "]";
      Body body;
      body.name = as_string(require((*it)[i], "name", p), p + ".name");
      if (!body_names.insert(body.name).second) fail(p + ".name", "duplicate body name '" + body.name + "'");
      const json& members = require((*it)[i], "members", p);
      if (!members.is_array() || members.empty()) fail(p + ".members", "expected a non-empty array");
      std::set<int> seen;
      for (std::size_t j = 0; j < members.size(); ++j) {
        const std::string q = p + ".members[" + std::to_string(j) + "]";
        int id = 0;
        if (members[j].is_string()) {
          const auto found = elem_by_name.find(members[j].get<std::string>());
          if (found == elem_by_name.end()) fail(q, "unknown elementary body '" + members[j].get<std::string>() + "'");
          id = found->second;
        } else {
          id = static_cast<int>(as_int(members[j], q));
          if (!elem_ids.count(id)) fail(q, "unknown elementary body id " + std::to_string(id));
        }
        if (!seen.insert(id).second) fail(q, "member listed twice");
        body.members.push_back(id);
      }
      sc.bodies.push_back(std::move(body));
    }
  }

  sc.horizon = root.contains("horizon") ? as_int(root["horizon"], "horizon") : 1;
  if (sc.horizon < 1) fail("horizon", "must be at least 1");

  sc.dynamics = std::make_shared<const Dynamics>(Dynamics{std::move(env), std::move(colours), cap});
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

Scenario translated(const Scenario& scenario, const IntVector& offset) {
  const std::size_t n = scenario.environment().dimension();
  if (offset.size() != n) throw std::invalid_argument("translation has wrong dimension");
  IntVector counts = offset;
  counts.push_back(0);
  const LatticeCoord shift = LatticeCoord::from_counts(std::move(counts));
  Scenario out = scenario;
  for (auto& p : out.population) p.head = p.head + shift;
  return out;
}

Scenario with_saturation_cap(const Scenario& scenario, int cap) {
  Scenario out = scenario;
  Dynamics dyn = *scenario.dynamics;
  dyn.saturation_cap = cap;
  out.dynamics = std::make_shared<const Dynamics>(std::move(dyn));
  return out;
}

}  // namespace collective
