#include "conleygp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conleygp/error.hpp"

namespace conleygp {

CellComplex1D::CellComplex1D(Domain domain, int subdivision_exponent)
    : domain_(Domain::make(domain.lower, domain.upper)), exponent_(subdivision_exponent) {
  if (subdivision_exponent < 2 || subdivision_exponent > 24) {
    throw ConfigError("subdivision exponent B must lie in [2, 24]");
  }
  edge_count_ = std::size_t{1} << subdivision_exponent;
  epsilon_ = std::ldexp(domain_.length(), -subdivision_exponent);
}

double CellComplex1D::vertex(std::size_t i) const {
  if (i > edge_count_) throw ConfigError("vertex index " + std::to_string(i) + " out of range");
  if (i == edge_count_) return domain_.upper;
  return domain_.lower + static_cast<double>(i) * epsilon_;
}

Interval CellComplex1D::edge_support(std::size_t i) const {
  if (i >= edge_count_) throw ConfigError("edge index " + std::to_string(i) + " out of range");
  return {vertex(i), vertex(i + 1)};
}

std::vector<double> CellComplex1D::odd_midpoints() const {
  std::vector<double> out(odd_edge_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = domain_.lower + (2.0 * static_cast<double>(i) + 1.5) * epsilon_;
  }
  return out;
}

EdgeRange CellComplex1D::locate_edges(double lo, double hi) const {
  if (!(lo <= hi)) throw ConfigError("locate_edges requires lo <= hi");
  EdgeRange out;
  out.clipped = lo < domain_.lower || hi > domain_.upper;
  if (hi < domain_.lower || lo > domain_.upper) return out;

  const auto n = static_cast<std::ptrdiff_t>(edge_count_);
  // first: smallest i with v_{i+1} >= lo.
  std::ptrdiff_t first = static_cast<std::ptrdiff_t>(std::floor((lo - domain_.lower) / epsilon_)) - 1;
  first = std::clamp<std::ptrdiff_t>(first, 0, n - 1);
  while (first > 0 && vertex(static_cast<std::size_t>(first)) >= lo) --first;
  while (first < n - 1 && vertex(static_cast<std::size_t>(first + 1)) < lo) ++first;
  // last: largest i with v_i <= hi.
  std::ptrdiff_t last = static_cast<std::ptrdiff_t>(std::floor((hi - domain_.lower) / epsilon_)) + 1;
  last = std::clamp<std::ptrdiff_t>(last, 0, n - 1);
  while (last < n - 1 && vertex(static_cast<std::size_t>(last + 1)) <= hi) ++last;
  while (last > 0 && vertex(static_cast<std::size_t>(last)) > hi) --last;

  out.first = static_cast<std::size_t>(first);
  out.last = static_cast<std::size_t>(last);
  return out;
}

std::size_t CellComplex1D::edge_containing(double x) const {
  const auto n = static_cast<std::ptrdiff_t>(edge_count_);
  auto i = static_cast<std::ptrdiff_t>(std::floor((x - domain_.lower) / epsilon_));
  i = std::clamp<std::ptrdiff_t>(i, 0, n - 1);
  while (i > 0 && vertex(static_cast<std::size_t>(i)) > x) --i;
  while (i < n - 1 && vertex(static_cast<std::size_t>(i + 1)) <= x) ++i;
  return static_cast<std::size_t>(i);
}

}  // namespace conleygp
