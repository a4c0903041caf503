#pragma once

#include <cstddef>
#include <vector>

#include "conleygp/dataio.hpp"

namespace conleygp {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Contiguous inclusive range of edge indices; empty when first > last.
struct EdgeRange {
  std::size_t first = 1;
  std::size_t last = 0;
  /// The located interval reached outside the domain.
  bool clipped = false;

  bool empty() const { return first > last; }
  std::size_t size() const { return empty() ? 0 : last - first + 1; }
  bool contains(std::size_t e) const { return e >= first && e <= last; }

  friend bool operator==(const EdgeRange&, const EdgeRange&) = default;
};

/// Uniform subdivision of [lower, upper] into 2^B edges e_i = [v_i, v_{i+1}].
/// Odd edges e_{2i+1} carry the midpoints where confidence bands are placed.
class CellComplex1D {
 public:
  CellComplex1D(Domain domain, int subdivision_exponent);

  const Domain& domain() const { return domain_; }
  int exponent() const { return exponent_; }
  double epsilon() const { return epsilon_; }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t vertex_count() const { return edge_count_ + 1; }
  std::size_t odd_edge_count() const { return edge_count_ / 2; }

  double vertex(std::size_t i) const;
  Interval edge_support(std::size_t i) const;

  /// m_{2i+1} = lower + (2i + 3/2) eps, ascending.
  std::vector<double> odd_midpoints() const;

  /// Edges whose closed support meets the closed interval [lo, hi], clamped
  /// to the complex. `clipped` is set when the interval leaves the domain.
  EdgeRange locate_edges(double lo, double hi) const;
  EdgeRange locate_edges(const Interval& iv) const { return locate_edges(iv.lo, iv.hi); }

  /// Index of the edge whose half-open support [v_i, v_{i+1}) holds x; the
  /// last edge also owns the right endpoint.
  std::size_t edge_containing(double x) const;

 private:
  Domain domain_;
  int exponent_;
  std::size_t edge_count_;
  double epsilon_;
};

}  // namespace conleygp
