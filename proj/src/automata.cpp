#include "collective/automata.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace collective {

NeighbourhoodState::NeighbourhoodState(std::size_t directions, std::size_t colours, int cap)
    : directions_(directions), colours_(colours), cap_(cap), counts_(directions * colours, 0) {
  if (cap < 1) throw std::invalid_argument("saturation cap must be positive");
}

void NeighbourhoodState::add(DirIndex d, ColourIndex c, int amount) {
  int& cell = counts_.at(d * colours_ + c);
  cell = std::min(cap_, cell + amount);
}

void NeighbourhoodState::set(DirIndex d, ColourIndex c, int value) {
  counts_.at(d * colours_ + c) = std::clamp(value, 0, cap_);
}

bool GuardAtom::holds(const NeighbourhoodState& nb) const {
  const int count = nb.at(dir, colour);
  return kind == Kind::Zero ? count == 0 : count >= threshold;
}

DirIndex evaluate(const OutputRule& rule, const NeighbourhoodState& nb) {
  const auto check_dir = [&](DirIndex d) {
    if (d >= nb.direction_count()) {
      throw std::invalid_argument("rule refers to direction " + std::to_string(d + 1) + " but state has " +
                                  std::to_string(nb.direction_count()));
    }
  };
  for (const auto& clause : rule.clauses) {
    bool match = true;
    for (const auto& atom : clause.guard) {
      check_dir(atom.dir);
      if (atom.colour >= nb.colour_count()) {
        throw std::invalid_argument("rule refers to colour " + std::to_string(atom.colour + 1) +
                                    " but state has " + std::to_string(nb.colour_count()));
      }
      if (!atom.holds(nb)) {
        match = false;
        break;
      }
    }
    if (match) {
      check_dir(clause.output);
      return clause.output;
    }
  }
  check_dir(rule.fallback);
  return rule.fallback;
}

bool is_vacuum(const NeighbourhoodState& nb, DirIndex own_dir) {
  for (DirIndex d = 0; d < nb.direction_count(); ++d) {
    if (d == own_dir) continue;
    for (ColourIndex c = 0; c < nb.colour_count(); ++c) {
      if (nb.at(d, c) != 0) return false;
    }
  }
  return true;
}

ValidationReport validate_colour_set(const std::vector<Colour>& colours, const Environment& env,
                                     int cap) {
  ValidationReport report;
  if (cap < 1) report.violations.push_back("saturation cap must be positive");
  std::set<std::string> names;
  const std::size_t m = env.direction_count();
  const std::size_t r = colours.size();
  for (std::size_t i = 0; i < colours.size(); ++i) {
    const Colour& colour = colours[i];
    const std::string label = "colour " + std::to_string(colour.id);
    if (colour.id != static_cast<int>(i + 1)) {
      report.violations.push_back(label + ": ids must be contiguous from 1 (expected " +
                                  std::to_string(i + 1) + ")");
    }
    if (!names.insert(colour.name).second) {
      report.violations.push_back(label + ": duplicate name '" + colour.name + "'");
    }
    const auto check_dir = [&](DirIndex d, const std::string& where) {
      if (d >= m) {
        report.violations.push_back(label + ": " + where + " refers to direction " +
                                    std::to_string(d + 1) + " of " + std::to_string(m));
      }
    };
    for (std::size_t k = 0; k < colour.rule.clauses.size(); ++k) {
      const auto& clause = colour.rule.clauses[k];
      const std::string where = "clause " + std::to_string(k + 1);
      check_dir(clause.output, where + " output");
      for (const auto& atom : clause.guard) {
        check_dir(atom.dir, where + " guard");
        if (atom.colour >= r) {
          report.violations.push_back(label + ": " + where + " guard refers to colour " +
                                      std::to_string(atom.colour + 1) + " of " + std::to_string(r));
        }
        if (atom.kind == GuardAtom::Kind::AtLeast) {
          if (atom.threshold > cap) {
            report.violations.push_back(label + ": " + where + " unreachable guard (threshold " +
                                        std::to_string(atom.threshold) + " > cap " +
                                        std::to_string(cap) + ")");
          } else if (atom.threshold < 1) {
            report.violations.push_back(label + ": " + where + " threshold must be at least 1");
          }
        }
      }
    }
    check_dir(colour.rule.fallback, "default");
  }
  return report;
}

}  // namespace collective
