#include "conleygp/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conleygp {

namespace {

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Image of an interval; one that misses the domain entirely is pinned to the
// boundary edge it fell off, so that every cell keeps a nonempty image.
EdgeRange image_of(const CellComplex1D& complex, double lo, double hi) {
  EdgeRange r = complex.locate_edges(lo, hi);
  if (r.empty()) {
    const std::size_t e = hi < complex.domain().lower ? 0 : complex.edge_count() - 1;
    r.first = r.last = e;
    r.clipped = true;
  }
  return r;
}

std::string ray_message(std::size_t i, double required, double L) {
  std::ostringstream os;
  os.precision(10);
  os << "Lipschitz rays at odd midpoints " << i - 1 << " and " << i
     << " do not intersect for L = " << L << "; need L >= " << required;
  return os.str();
}

}  // namespace

RayValidityError::RayValidityError(std::size_t odd_index, double required_L, double L)
    : ConfigError(ray_message(odd_index, required_L, L)),
      odd_index_(odd_index),
      required_L_(required_L) {}

double VerticalFiber::diameter() const {
  if (!second) return first.width();
  return std::max(first.hi, second->hi) - std::min(first.lo, second->lo);
}

Enclosure::Enclosure(CellComplex1D complex, MidpointBand band, FiberTable fibers, double L)
    : complex_(std::move(complex)), band_(std::move(band)), fibers_(std::move(fibers)), L_(L) {
  if (fibers_.size() != complex_.edge_count() || fibers_.image.size() != fibers_.size()) {
    throw InternalError("fiber table does not match the complex");
  }
  const Interval dom{complex_.domain().lower, complex_.domain().upper};
  for (const Interval& q : fibers_.q) {
    if (!dom.contains(q)) {
      g_tilde_contained_ = false;
      break;
    }
  }
}

Interval Enclosure::extended_fiber(std::size_t e) const {
  const EdgeRange& r = fibers_.image.at(e);
  const Interval support{complex_.vertex(r.first), complex_.vertex(r.last + 1)};
  return hull(fibers_.q[e], support);
}

VerticalFiber Enclosure::fiber_at(double x) const {
  if (!complex_.domain().contains(x)) throw ConfigError("fiber_at: x outside the domain");
  const std::size_t e = complex_.edge_containing(x);
  VerticalFiber out{extended_fiber(e), std::nullopt};
  if (e > 0 && x == complex_.vertex(e)) {
    const Interval left = extended_fiber(e - 1);
    if (left.intersects(out.first)) {
      out.first = hull(left, out.first);
    } else if (left.lo < out.first.lo) {
      out.second = out.first;
      out.first = left;
    } else {
      out.second = left;
    }
  }
  return out;
}

MidpointBand build_bands(const GpModel& model, const CellComplex1D& complex,
                         const RadiusAssignment& radii) {
  MidpointBand band;
  band.midpoint = complex.odd_midpoints();
  const std::size_t n = band.midpoint.size();
  if (radii.size() != n || radii.delta.size() != n) {
    throw ConfigError("radius assignment has " + std::to_string(radii.size()) +
                      " entries for " + std::to_string(n) + " odd midpoints");
  }
  band.mean.resize(n);
  band.sd.resize(n);
  band.z = radii.z;
  band.lo.resize(n);
  band.hi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Prediction p = model.predict(band.midpoint[i]);
    band.mean[i] = p.mean;
    band.sd[i] = p.sd();
    const double half = radii.z[i] * band.sd[i];
    band.lo[i] = p.mean - half;
    band.hi[i] = p.mean + half;
  }
  return band;
}

double required_lipschitz(const MidpointBand& band, const CellComplex1D& complex) {
  double gap = 0.0;
  for (std::size_t i = 1; i < band.size(); ++i) {
    gap = std::max({gap, std::abs(band.hi[i] - band.hi[i - 1]), std::abs(band.lo[i] - band.lo[i - 1])});
  }
  return gap / (2.0 * complex.epsilon());
}

FiberTable build_fibers(const MidpointBand& band, const CellComplex1D& complex, double L) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("Lipschitz constant must be positive");
  const std::size_t nodd = complex.odd_edge_count();
  if (band.size() != nodd) throw ConfigError("band does not match the odd edges of the complex");

  const double eps = complex.epsilon();
  const double reach = 2.0 * eps * L;
  for (std::size_t i = 1; i < nodd; ++i) {
    const double gap = std::max(std::abs(band.hi[i] - band.hi[i - 1]), std::abs(band.lo[i] - band.lo[i - 1]));
    if (gap > reach) throw RayValidityError(i, required_lipschitz(band, complex), L);
  }

  const std::size_t n = complex.edge_count();
  FiberTable t;
  t.q.resize(n);
  t.image.resize(n);
  t.clipped.resize(n);
  const Interval dom{complex.domain().lower, complex.domain().upper};

  for (std::size_t i = 0; i < nodd; ++i) {
    const std::size_t odd = 2 * i + 1;
    t.q[odd] = {band.lo[i] - 0.5 * eps * L, band.hi[i] + 0.5 * eps * L};
    t.image[odd] = image_of(complex, band.lo[i], band.hi[i]);

    const std::size_t even = 2 * i;
    if (i == 0) {
      t.q[even] = {band.lo[0] - 1.5 * eps * L, band.hi[0] + 1.5 * eps * L};
    } else {
      t.q[even] = {band.lo[i - 1] - eps * L + 0.5 * (band.lo[i] - band.lo[i - 1]),
                   band.hi[i - 1] + eps * L + 0.5 * (band.hi[i] - band.hi[i - 1])};
    }
    t.image[even] = image_of(complex, t.q[even].lo, t.q[even].hi);
  }
  for (std::size_t e = 0; e < n; ++e) t.clipped[e] = dom.contains(t.q[e]) ? 0 : 1;
  return t;
}

EnclosureDiagnostics diagnose(const Enclosure& enc, const GpModel& model) {
  const CellComplex1D& c = enc.complex();
  const MidpointBand& band = enc.band();
  EnclosureDiagnostics d;
  d.epsilon = c.epsilon();
  for (std::size_t i = 0; i < band.size(); ++i) {
    d.ell = std::max(d.ell, band.hi[i] - band.lo[i]);
    d.max_posterior_sd = std::max(d.max_posterior_sd, band.sd[i]);
  }
  d.diameter_bound = 2.0 * (d.ell + 2.0 * enc.L() * d.epsilon + 2.0 * d.epsilon);
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    d.max_fiber_diameter = std::max(d.max_fiber_diameter, enc.fiber_at(c.vertex(v)).diameter());
  }
  d.gamma = covering_radius(model.data());
  d.variance_bound = std::sqrt(12.0) / model.theta_hat() * d.gamma * d.gamma / 4.0;
  d.required_L = required_lipschitz(band, c);
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    d.clipped_edges += enc.fibers().clipped[e];
    d.image_cells += enc.fibers().image[e].size();
  }
  return d;
}

Assembly assemble(const GpModel& model, const CellComplex1D& complex,
                  const RadiusAssignment& radii, double L) {
  MidpointBand band = build_bands(model, complex, radii);
  FiberTable fibers = build_fibers(band, complex, L);
  Enclosure enc(complex, std::move(band), std::move(fibers), L);
  EnclosureDiagnostics d = diagnose(enc, model);
  return {std::move(enc), d};
}

GraphCheck graph_inside(const Enclosure& enclosure, std::span<const Point> probe) {
  for (const Point& p : probe) {
    if (!enclosure.fiber_at(p.x).contains(p.y)) return {false, p};
  }
  return {};
}

FiberProbe::FiberProbe(const Enclosure& enclosure, std::span<const double> xs) {
  fibers_.reserve(xs.size());
  for (double x : xs) fibers_.push_back(enclosure.fiber_at(x));
}

bool FiberProbe::contains(std::span<const double> ys) const {
  if (ys.size() != fibers_.size()) throw ConfigError("probe size mismatch");
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!fibers_[i].contains(ys[i])) return false;
  }
  return true;
}

}  // namespace conleygp
