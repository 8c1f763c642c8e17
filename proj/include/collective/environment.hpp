#ifndef COLLECTIVE_ENVIRONMENT_HPP
#define COLLECTIVE_ENVIRONMENT_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collective/matrix.hpp"
#include "collective/rational.hpp"

namespace collective {

using DirIndex = std::size_t;
using IntVector = std::vector<std::int64_t>;

struct Direction {
  std::string name;
  IntVector vector;  // lattice coordinates, length n
};

/// Ordered set of actual spatial directions. Construction only checks shape
/// (vector lengths, unique names); the geometric conditions are reported by
/// check_actual_direction_count.
class DirectionSet {
 public:
  DirectionSet(std::size_t dimension, std::vector<Direction> directions);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return directions_.size(); }
  const Direction& operator[](DirIndex d) const { return directions_.at(d); }
  const IntVector& vector(DirIndex d) const { return directions_.at(d).vector; }
  const std::string& name(DirIndex d) const { return directions_.at(d).name; }
  std::optional<DirIndex> find(std::string_view name) const;

 private:
  std::size_t dimension_;
  std::vector<Direction> directions_;
};

/// Unit coordinate vectors plus (-1,...,-1). Names are R/L for n = 1 and
/// d1..d{n+1} otherwise.
DirectionSet standard_directions(std::size_t n);

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks m = n+1, zero sum, distinctness and independence of every
/// n-element subset.
ValidationReport check_actual_direction_count(const DirectionSet& directions);

/// Vertex of the lattice as direction counts modulo (1,...,1). The canonical
/// representative has its last count equal to zero.
class LatticeCoord {
 public:
  LatticeCoord() = default;

  static LatticeCoord from_counts(IntVector counts);
  static LatticeCoord origin(std::size_t n) { return LatticeCoord(IntVector(n + 1, 0)); }

  const IntVector& counts() const { return counts_; }
  std::size_t dimension() const { return counts_.empty() ? 0 : counts_.size() - 1; }

  LatticeCoord operator+(const LatticeCoord& other) const;
  LatticeCoord operator-(const LatticeCoord& other) const;

  /// Counts joined with ';', e.g. "1;0".
  std::string to_string() const;

  auto operator<=>(const LatticeCoord&) const = default;

 private:
  explicit LatticeCoord(IntVector counts) : counts_(std::move(counts)) {}
  IntVector counts_;
};

struct LatticeCoordHash {
  std::size_t operator()(const LatticeCoord& c) const noexcept;
};

struct Arc {
  LatticeCoord head;
  DirIndex dir = 0;

  auto operator<=>(const Arc&) const = default;
};

struct Topology {
  enum class Kind { Infinite, Torus };

  Kind kind = Kind::Infinite;
  // Generators of the identified sublattice, each expressed in counts over
  // the first n directions.
  std::vector<IntVector> basis;

  static Topology infinite() { return {}; }
  static Topology torus(std::vector<IntVector> basis) { return {Kind::Torus, std::move(basis)}; }
  static Topology ring(std::int64_t circumference) { return torus({{circumference}}); }
};

class Environment {
 public:
  /// Throws std::invalid_argument when the direction set fails
  /// check_actual_direction_count or the torus basis is invalid.
  Environment(DirectionSet directions, Topology topology);

  const DirectionSet& directions() const { return directions_; }
  std::size_t dimension() const { return directions_.dimension(); }
  std::size_t direction_count() const { return directions_.size(); }
  const Topology& topology() const { return topology_; }
  bool is_torus() const { return topology_.kind == Topology::Kind::Torus; }

  /// Quotient reduction; identity on the infinite lattice.
  LatticeCoord reduce(const LatticeCoord& v) const;
  /// v + vector(d), not reduced.
  LatticeCoord translate(const LatticeCoord& v, DirIndex d) const;
  /// v + vector(d), reduced.
  LatticeCoord step_vertex(const LatticeCoord& v, DirIndex d) const;
  LatticeCoord tail(const Arc& arc) const;
  LatticeCoord unit(DirIndex d) const;

  IntVector lattice_point(const LatticeCoord& v) const;
  RationalVector rational_point(const LatticeCoord& v) const;
  /// Converts a rational lattice point back to (rational) direction counts
  /// over the first n directions.
  RationalVector counts_of_point(const RationalVector& point) const;

  const std::vector<double>& embedding(DirIndex d) const { return embedding_.at(d); }
  std::vector<double> euclidean_position(const LatticeCoord& v) const;
  std::vector<double> euclidean_of_point(const RationalVector& point) const;

  std::optional<std::int64_t> vertex_count() const;
  /// Number of steps along d that return to the start; nullopt when infinite.
  std::optional<std::int64_t> period_along(DirIndex d) const;

 private:
  DirectionSet directions_;
  Topology topology_;
  std::vector<IntVector> hnf_columns_;  // lower-triangular basis of the sublattice
  RationalMatrix point_to_counts_;
  std::vector<std::vector<double>> embedding_;
};

Environment make_standard_environment(std::size_t n, Topology topology = Topology::infinite());

}  // namespace collective

#endif  // COLLECTIVE_ENVIRONMENT_HPP
