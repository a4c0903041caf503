#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "conleygp/confidence.hpp"
#include "conleygp/dataio.hpp"
#include "conleygp/error.hpp"
#include "conleygp/gp.hpp"
#include "conleygp/grid.hpp"

namespace conleygp {

/// Confidence intervals [mean - z sd, mean + z sd] at the odd-edge midpoints.
/// Entry i belongs to odd edge 2i + 1.
struct MidpointBand {
  std::vector<double> midpoint;
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> z;
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t size() const { return lo.size(); }
};

/// Per-edge enclosure intervals Q(e) and combinatorial images F(e).
struct FiberTable {
  std::vector<Interval> q;
  std::vector<EdgeRange> image;
  /// The interval that produced image(e) reached outside the domain.
  std::vector<std::uint8_t> clipped;

  std::size_t size() const { return q.size(); }
};

/// Neighbouring band endpoints jump by more than the Lipschitz rays can bridge.
class RayValidityError : public ConfigError {
 public:
  RayValidityError(std::size_t odd_index, double required_L, double L);

  /// Index i of the offending odd edge 2i + 1 (paired with 2i - 1).
  std::size_t odd_index() const { return odd_index_; }
  double required_L() const { return required_L_; }

 private:
  std::size_t odd_index_;
  double required_L_;
};

struct EnclosureDiagnostics {
  double max_fiber_diameter = 0.0;
  double ell = 0.0;
  double epsilon = 0.0;
  double diameter_bound = 0.0;
  double gamma = 0.0;
  double variance_bound = 0.0;
  double max_posterior_sd = 0.0;
  /// Smallest L for which the rays between adjacent midpoints meet.
  double required_L = 0.0;
  std::size_t clipped_edges = 0;
  std::size_t image_cells = 0;
};

/// Closed fiber of G-tilde above one point: a single interval, or two when
/// the fibers of the edges meeting at a vertex do not overlap.
struct VerticalFiber {
  Interval first;
  std::optional<Interval> second;

  bool contains(double y) const { return first.contains(y) || (second && second->contains(y)); }
  double diameter() const;
};

class Enclosure {
 public:
  Enclosure(CellComplex1D complex, MidpointBand band, FiberTable fibers, double L);

  const CellComplex1D& complex() const { return complex_; }
  const MidpointBand& band() const { return band_; }
  const FiberTable& fibers() const { return fibers_; }
  double L() const { return L_; }
  /// True iff no Q interval leaves the domain, i.e. G-tilde = G.
  bool g_tilde_contained() const { return g_tilde_contained_; }

  /// The G range of edge e (= F(e)).
  const EdgeRange& g_range(std::size_t e) const { return fibers_.image[e]; }

  /// Q(e) united with the support of F(e).
  Interval extended_fiber(std::size_t e) const;

  /// G-tilde above x: one edge's extended fiber in an edge interior, the
  /// union of the two incident ones at an interior vertex.
  VerticalFiber fiber_at(double x) const;

 private:
  CellComplex1D complex_;
  MidpointBand band_;
  FiberTable fibers_;
  double L_;
  bool g_tilde_contained_ = true;
};

MidpointBand build_bands(const GpModel& model, const CellComplex1D& complex,
                         const RadiusAssignment& radii);

/// Smallest L making every pair of adjacent rays intersect: max gap / (2 eps).
double required_lipschitz(const MidpointBand& band, const CellComplex1D& complex);

/// Throws RayValidityError when L < required_lipschitz(band, complex).
FiberTable build_fibers(const MidpointBand& band, const CellComplex1D& complex, double L);

struct Assembly {
  Enclosure enclosure;
  EnclosureDiagnostics diagnostics;
};

Assembly assemble(const GpModel& model, const CellComplex1D& complex,
                  const RadiusAssignment& radii, double L);

/// Recomputes every diagnostic from an existing enclosure.
EnclosureDiagnostics diagnose(const Enclosure& enclosure, const GpModel& model);

struct GraphCheck {
  bool inside = true;
  std::optional<Point> violation;
};

GraphCheck graph_inside(const Enclosure& enclosure, std::span<const Point> probe);

/// Precomputed G-tilde fibers on a fixed x-grid, for checking many paths.
class FiberProbe {
 public:
  FiberProbe(const Enclosure& enclosure, std::span<const double> xs);

  std::size_t size() const { return fibers_.size(); }
  const VerticalFiber& fiber(std::size_t i) const { return fibers_[i]; }
  /// True iff ys[i] lies in fiber i for every i.
  bool contains(std::span<const double> ys) const;

 private:
  std::vector<VerticalFiber> fibers_;
};

}  // namespace conleygp
