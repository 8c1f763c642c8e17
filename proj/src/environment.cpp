#include "collective/environment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace collective {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// x*a + y*b = g >= 0
std::int64_t extended_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

// Column-style Hermite form: column j has zeros in rows < j.
std::vector<IntVector> lower_triangular_basis(std::vector<IntVector> cols) {
  const std::size_t n = cols.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t a = cols[i][i];
      const std::int64_t b = cols[j][i];
      if (b == 0) continue;
      std::int64_t x = 0, y = 0;
      const std::int64_t g = extended_gcd(a, b, x, y);
      IntVector ci(n), cj(n);
      for (std::size_t r = 0; r < n; ++r) {
        ci[r] = x * cols[i][r] + y * cols[j][r];
        cj[r] = (-b / g) * cols[i][r] + (a / g) * cols[j][r];
      }
      cols[i] = std::move(ci);
      cols[j] = std::move(cj);
    }
    if (cols[i][i] < 0) {
      for (auto& e : cols[i]) e = -e;
    }
    if (cols[i][i] == 0) throw std::invalid_argument("torus basis vectors are linearly dependent");
  }
  return cols;
}

std::vector<std::vector<double>> simplex_embedding(std::size_t n) {
  // Centered unit vectors of the standard simplex in R^{n+1}, expressed in an
  // orthonormal basis of the zero-sum hyperplane built from the first n.
  const std::size_t m = n + 1;
  std::vector<std::vector<double>> centered(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) centered[i][k] = (i == k ? 1.0 : 0.0) - 1.0 / double(m);
  }
  std::vector<std::vector<double>> basis;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> u = centered[i];
    for (const auto& b : basis) {
      double dot = 0;
      for (std::size_t k = 0; k < m; ++k) dot += u[k] * b[k];
      for (std::size_t k = 0; k < m; ++k) u[k] -= dot * b[k];
    }
    double norm = 0;
    for (double x : u) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : u) x /= norm;
    basis.push_back(std::move(u));
  }
  const double scale = std::sqrt(double(n) / double(m));
  std::vector<std::vector<double>> out(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0;
      for (std::size_t k = 0; k < m; ++k) dot += centered[i][k] * basis[j][k];
      out[i][j] = dot / scale;
      if (std::abs(out[i][j]) < 1e-12) out[i][j] = 0.0;  // exact zeros keep axis-aligned traces clean
    }
  }
  return out;
}

Rational subset_determinant(const DirectionSet& dirs, const std::vector<DirIndex>& subset) {
  std::vector<RationalVector> columns;
  for (DirIndex d : subset) {
    RationalVector col;
    for (auto x : dirs.vector(d)) col.emplace_back(static_cast<long>(x));
    columns.push_back(std::move(col));
  }
  return RationalMatrix::from_columns(columns).determinant();
}

}  // namespace

DirectionSet::DirectionSet(std::size_t dimension, std::vector<Direction> directions)
    : dimension_(dimension), directions_(std::move(directions)) {
  if (dimension_ == 0) throw std::invalid_argument("dimension must be at least 1");
  std::set<std::string> names;
  for (const auto& d : directions_) {
    if (d.vector.size() != dimension_) {
      throw std::invalid_argument("direction '" + d.name + "' has " +
                                  std::to_string(d.vector.size()) + " components, expected " +
                                  std::to_string(dimension_));
    }
    if (d.name.empty()) throw std::invalid_argument("direction names must be non-empty");
    if (!names.insert(d.name).second) {
      throw std::invalid_argument("duplicate direction name '" + d.name + "'");
    }
  }
}

std::optional<DirIndex> DirectionSet::find(std::string_view name) const {
  for (DirIndex d = 0; d < directions_.size(); ++d) {
    if (directions_[d].name == name) return d;
  }
  return std::nullopt;
}

DirectionSet standard_directions(std::size_t n) {
  std::vector<Direction> dirs;
  for (std::size_t i = 0; i <= n; ++i) {
    IntVector v(n, i == n ? -1 : 0);
    if (i < n) v[i] = 1;
    std::string name = n == 1 ? (i == 0 ? "R" : "L") : "d" + std::to_string(i + 1);
    dirs.push_back({std::move(name), std::move(v)});
  }
  return DirectionSet(n, std::move(dirs));
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out += "; ";
    out += violations[i];
  }
  return out;
}

ValidationReport check_actual_direction_count(const DirectionSet& dirs) {
  ValidationReport report;
  const std::size_t n = dirs.dimension();
  const std::size_t m = dirs.size();
  if (m != n + 1) {
    report.violations.push_back("m ≠ n+1: " + std::to_string(m) +
                                " actual directions in dimension " + std::to_string(n) +
                                ", affine frame maps require exactly " + std::to_string(n + 1));
  }
  IntVector sum(n, 0);
  for (DirIndex d = 0; d < m; ++d) {
    for (std::size_t k = 0; k < n; ++k) sum[k] += dirs.vector(d)[k];
  }
  if (std::any_of(sum.begin(), sum.end(), [](auto x) { return x != 0; })) {
    report.violations.push_back("direction vectors do not sum to zero");
  }
  for (DirIndex d = 0; d < m; ++d) {
    const auto& v = dirs.vector(d);
    if (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; })) {
      report.violations.push_back("zero/dependent directions: '" + dirs.name(d) + "' is the zero vector");
    }
    for (DirIndex e = d + 1; e < m; ++e) {
      if (dirs.vector(e) == v) {
        report.violations.push_back("directions '" + dirs.name(d) + "' and '" + dirs.name(e) +
                                    "' coincide");
      }
    }
  }
  if (m >= n && m <= 16) {
    // Enumerate n-element subsets via a bitmask.
    bool dependent = false;
    for (std::uint32_t mask = 0; mask < (1u << m) && !dependent; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
      std::vector<DirIndex> subset;
      for (DirIndex d = 0; d < m; ++d) {
        if (mask & (1u << d)) subset.push_back(d);
      }
      if (subset_determinant(dirs, subset) == 0) dependent = true;
    }
    if (dependent) {
      report.violations.push_back("zero/dependent directions: some " + std::to_string(n) +
                                  "-element subset is linearly dependent");
    }
  }
  return report;
}

LatticeCoord LatticeCoord::from_counts(IntVector counts) {
  if (counts.empty()) throw std::invalid_argument("empty lattice coordinate");
  const std::int64_t last = counts.back();
  for (auto& c : counts) c -= last;
  return LatticeCoord(std::move(counts));
}

LatticeCoord LatticeCoord::operator+(const LatticeCoord& other) const {
  IntVector out = counts_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.counts_.at(i);
  return from_counts(std::move(out));
}

LatticeCoord LatticeCoord::operator-(const LatticeCoord& other) const {
  IntVector out = counts_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.counts_.at(i);
  return from_counts(std::move(out));
}

std::string LatticeCoord::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(counts_[i]);
  }
  return out;
}

std::size_t LatticeCoordHash::operator()(const LatticeCoord& c) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (auto x : c.counts()) {
    h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

Environment::Environment(DirectionSet directions, Topology topology)
    : directions_(std::move(directions)), topology_(std::move(topology)) {
  const auto report = check_actual_direction_count(directions_);
  if (!report.ok()) throw std::invalid_argument("invalid direction set: " + report.summary());
  const std::size_t n = dimension();

  std::vector<RationalVector> columns;
  for (DirIndex d = 0; d < n; ++d) {
    RationalVector col;
    for (auto x : directions_.vector(d)) col.emplace_back(static_cast<long>(x));
    columns.push_back(std::move(col));
  }
  point_to_counts_ = RationalMatrix::from_columns(columns).inverse();
  embedding_ = simplex_embedding(n);

  if (is_torus()) {
    const auto& basis = topology_.basis;
    if (basis.size() != n) {
      throw std::invalid_argument("torus basis needs " + std::to_string(n) + " vectors");
    }
    for (const auto& b : basis) {
      if (b.size() != n) throw std::invalid_argument("torus basis vector has wrong length");
    }
    if (n == 1 && std::llabs(basis[0][0]) < 2) {
      throw std::invalid_argument("ring circumference must be at least 2");
    }
    hnf_columns_ = lower_triangular_basis(basis);
    for (DirIndex d = 0; d < direction_count(); ++d) {
      if (reduce(unit(d)) == LatticeCoord::origin(n)) {
        throw std::invalid_argument("torus identifies direction '" + directions_.name(d) +
                                    "' with a loop");
      }
    }
  }
}

LatticeCoord Environment::unit(DirIndex d) const {
  const std::size_t n = dimension();
  if (d > n) throw std::out_of_range("direction index out of range");
  IntVector counts(n + 1, 0);
  counts[d] = 1;
  return LatticeCoord::from_counts(std::move(counts));
}

LatticeCoord Environment::reduce(const LatticeCoord& v) const {
  if (!is_torus()) return v;
  const std::size_t n = dimension();
  IntVector c = v.counts();
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t q = floor_div(c[j], hnf_columns_[j][j]);
    if (q == 0) continue;
    for (std::size_t r = j; r < n; ++r) c[r] -= q * hnf_columns_[j][r];
  }
  return LatticeCoord::from_counts(std::move(c));
}

LatticeCoord Environment::translate(const LatticeCoord& v, DirIndex d) const { return v + unit(d); }

LatticeCoord Environment::step_vertex(const LatticeCoord& v, DirIndex d) const {
  return reduce(translate(v, d));
}

LatticeCoord Environment::tail(const Arc& arc) const { return reduce(arc.head - unit(arc.dir)); }

IntVector Environment::lattice_point(const LatticeCoord& v) const {
  const std::size_t n = dimension();
  IntVector p(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = v.counts()[i];
    if (c == 0) continue;
    for (std::size_t k = 0; k < n; ++k) p[k] += c * directions_.vector(i)[k];
  }
  return p;
}

RationalVector Environment::rational_point(const LatticeCoord& v) const {
  RationalVector out;
  for (auto x : lattice_point(v)) out.emplace_back(static_cast<long>(x));
  return out;
}

RationalVector Environment::counts_of_point(const RationalVector& point) const {
  return point_to_counts_ * point;
}

std::vector<double> Environment::euclidean_position(const LatticeCoord& v) const {
  const std::size_t n = dimension();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    const auto c = v.counts()[i];
    if (c == 0) continue;
    for (std::size_t k = 0; k < n; ++k) x[k] += double(c) * embedding_[i][k];
  }
  return x;
}

std::vector<double> Environment::euclidean_of_point(const RationalVector& point) const {
  const RationalVector counts = counts_of_point(point);
  const std::size_t n = dimension();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = counts[i].get_d();
    for (std::size_t k = 0; k < n; ++k) x[k] += c * embedding_[i][k];
  }
  return x;
}

std::optional<std::int64_t> Environment::vertex_count() const {
  if (!is_torus()) return std::nullopt;
  std::int64_t count = 1;
  for (std::size_t j = 0; j < dimension(); ++j) count *= hnf_columns_[j][j];
  return count;
}

std::optional<std::int64_t> Environment::period_along(DirIndex d) const {
  if (!is_torus()) return std::nullopt;
  const LatticeCoord start = LatticeCoord::origin(dimension());
  LatticeCoord v = step_vertex(start, d);
  std::int64_t k = 1;
  while (v != start) {
    v = step_vertex(v, d);
    ++k;
  }
  return k;
}

Environment make_standard_environment(std::size_t n, Topology topology) {
  return Environment(standard_directions(n), std::move(topology));
}

}  // namespace collective
