#include "conleygp/conley.hpp"

#include <algorithm>

#include "conleygp/error.hpp"

namespace conleygp {

namespace {

struct Run {
  std::size_t first = 0;
  std::size_t last = 0;
};

std::vector<Run> runs_of(const CellSet& cells) {
  std::vector<Run> out;
  for (auto c : cells) {
    if (!out.empty() && out.back().last + 1 == c) {
      out.back().last = c;
    } else {
      out.push_back({c, c});
    }
  }
  return out;
}

bool contains_sorted(const std::vector<std::size_t>& v, std::size_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// Index of the run whose closed vertex span [first, last + 1] holds v.
std::size_t run_of_vertex(const std::vector<Run>& runs, std::size_t v) {
  auto it = std::upper_bound(runs.begin(), runs.end(), v, [](std::size_t x, const Run& r) { return x < r.first; });
  if (it == runs.begin()) return RelativeHomology::npos;
  --it;
  return v <= it->last + 1 ? static_cast<std::size_t>(it - runs.begin()) : RelativeHomology::npos;
}

}  // namespace

RelativePair relative_chain_complex(const IndexPairCells& pair) {
  RelativePair rp;
  rp.basis1 = set_difference(pair.closure1.edges, pair.closure0.edges);
  rp.basis0 = set_difference(pair.closure1.vertices, pair.closure0.vertices);
  rp.boundary = Z5Matrix(rp.basis0.size(), rp.basis1.size());
  for (std::size_t j = 0; j < rp.basis1.size(); ++j) {
    const std::size_t e = rp.basis1[j];
    auto put = [&](std::size_t v, int s) {
      auto it = std::lower_bound(rp.basis0.begin(), rp.basis0.end(), v);
      if (it != rp.basis0.end() && *it == v) rp.boundary(static_cast<std::size_t>(it - rp.basis0.begin()), j) += Z5(s);
    };
    put(e + 1, 1);
    put(e, -1);
  }
  return rp;
}

std::size_t RelativeHomology::component_of_vertex(std::size_t v) const {
  auto it = std::upper_bound(components.begin(), components.end(), v,
                             [](std::size_t x, const Component& c) { return x < c.first_edge; });
  if (it == components.begin()) return npos;
  --it;
  return v <= it->last_edge + 1 ? static_cast<std::size_t>(it - components.begin()) : npos;
}

std::optional<std::size_t> RelativeHomology::h0_coordinate(std::size_t vertex) const {
  const std::size_t c = component_of_vertex(vertex);
  if (c == npos) throw InternalError("vertex " + std::to_string(vertex) + " is outside the pair");
  auto it = std::lower_bound(h0.begin(), h0.end(), c);
  if (it == h0.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - h0.begin());
}

std::vector<Z5> RelativeHomology::h1_coordinates(std::size_t p, std::size_t q) const {
  std::vector<Z5> out(h1.size());
  if (p == q) return out;
  const std::size_t lo = std::min(p, q), hi = std::max(p, q);
  const Z5 sign = q > p ? Z5(1) : Z5(-1);
  for (std::size_t j = 0; j < h1.size(); ++j) {
    if (h1[j].first_edge >= lo && h1[j].first_edge < hi) out[j] = sign;
  }
  return out;
}

RelativeHomology relative_homology(const IndexPairCells& pair) {
  RelativeHomology h;
  const auto comps = runs_of(pair.a1);
  const auto a0 = runs_of(pair.a0);
  std::size_t k = 0;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    RelativeHomology::Component c{comps[ci].first, comps[ci].last, 0};
    std::vector<Run> inside;
    while (k < a0.size() && a0[k].first <= c.last_edge) {
      if (a0[k].first < c.first_edge || a0[k].last > c.last_edge) throw InternalError("A0 is not inside A1");
      inside.push_back(a0[k++]);
    }
    c.a0_runs = inside.size();
    if (inside.empty()) h.h0.push_back(ci);
    for (std::size_t r = 1; r < inside.size(); ++r) h.h1.push_back({inside[r - 1].last + 1, inside[r].first - 1});
    h.components.push_back(c);
  }
  if (k != a0.size()) throw InternalError("A0 is not inside A1");
  return h;
}

// ---------------------------------------------------------------- selector

AcyclicityError::AcyclicityError(std::size_t vertex)
    : Error("acyclicity violated: images of the edges at vertex " + std::to_string(vertex) + " do not meet"),
      vertex_(vertex) {}

ChainSelector build_selector(const Digraph& g, ChainSelector::Rule rule) {
  const std::size_t n = g.size();
  ChainSelector s;
  s.phi0.resize(n + 1);
  for (std::size_t v = 0; v <= n; ++v) {
    std::size_t lo = 0, hi = n;
    if (v > 0) {
      lo = std::max(lo, g.out(v - 1).first);
      hi = std::min(hi, g.out(v - 1).last + 1);
    }
    if (v < n) {
      lo = std::max(lo, g.out(v).first);
      hi = std::min(hi, g.out(v).last + 1);
    }
    if (lo > hi) throw AcyclicityError(v);
    s.phi0[v] = rule == ChainSelector::Rule::leftmost ? lo : hi;
  }
  return s;
}

void verify_selector(const ChainSelector& s, const Digraph& g) {
  const std::size_t n = g.size();
  if (s.phi0.size() != n + 1) throw InternalError("selector size mismatch");
  std::vector<int> boundary;  // scratch, indexed by vertex
  for (std::size_t e = 0; e < n; ++e) {
    const EdgeRange& r = g.out(e);
    const std::size_t from = s.path_from(e), to = s.path_to(e);
    const std::size_t lo = std::min(from, to), hi = std::max(from, to);
    if (lo < r.first || hi > r.last + 1) {
      throw InternalError("phi1(e" + std::to_string(e) + ") leaves the support of F(e)");
    }
    // Expand the chain and take its boundary edge by edge.
    const int sign = to > from ? 1 : -1;
    boundary.assign(hi - lo + 1, 0);
    for (std::size_t k = lo; k < hi; ++k) {
      boundary[k + 1 - lo] += sign;
      boundary[k - lo] -= sign;
    }
    for (std::size_t k = 0; k < boundary.size(); ++k) {
      int expect = 0;
      if (lo + k == to) expect += 1;
      if (lo + k == from) expect -= 1;
      if (boundary[k] != expect) {
        throw InternalError("chain map identity fails at e" + std::to_string(e));
      }
    }
  }
}

// --------------------------------------------------------------- index map

std::array<Z5Matrix, 2> index_map(const IndexPairCells& pair, const RelativeHomology& h,
                                  const ChainSelector& s, const Digraph& g) {
  // Invariance of the pair under the selector.
  const auto a0_runs = runs_of(pair.a0);
  for (auto v : pair.closure1.vertices) {
    if (!contains_sorted(pair.closure1.vertices, s.phi0[v])) {
      throw InternalError("selector maps vertex " + std::to_string(v) + " out of closure1");
    }
  }
  for (auto v : pair.closure0.vertices) {
    if (!contains_sorted(pair.closure0.vertices, s.phi0[v])) {
      throw InternalError("selector maps vertex " + std::to_string(v) + " out of closure0");
    }
  }
  for (auto e : pair.a1) {
    if (h.component_of_vertex(s.path_from(e)) != h.component_of_vertex(s.path_to(e))) {
      throw InternalError("phi1(e" + std::to_string(e) + ") leaves closure1");
    }
    const EdgeRange& r = g.out(e);
    if (!contains_sorted(pair.a1, r.first) || !contains_sorted(pair.a1, r.last)) {
      throw InternalError("A1 is not invariant at e" + std::to_string(e));
    }
  }
  for (auto e : pair.a0) {
    const std::size_t ra = run_of_vertex(a0_runs, s.path_from(e));
    if (ra == RelativeHomology::npos || ra != run_of_vertex(a0_runs, s.path_to(e))) {
      throw InternalError("phi1(e" + std::to_string(e) + ") leaves closure0");
    }
  }

  std::array<Z5Matrix, 2> maps{Z5Matrix(h.dim0(), h.dim0()), Z5Matrix(h.dim1(), h.dim1())};
  for (std::size_t j = 0; j < h.dim0(); ++j) {
    const std::size_t v = h.components[h.h0[j]].first_edge;
    if (auto row = h.h0_coordinate(s.phi0[v])) maps[0](*row, j) = 1;
  }
  for (std::size_t j = 0; j < h.dim1(); ++j) {
    const auto coords = h.h1_coordinates(s.phi0[h.h1[j].first_edge], s.phi0[h.h1[j].last_edge + 1]);
    for (std::size_t i = 0; i < coords.size(); ++i) maps[1](i, j) = coords[i];
  }
  return maps;
}

InvertibleCore invertible_core(const Z5Matrix& a) {
  if (!a.square()) throw InternalError("invertible core of a non-square matrix");
  InvertibleCore core;
  if (a.rows() == 0) return core;
  Z5Matrix w = Z5Matrix::identity(a.rows());
  for (;;) {
    Z5Matrix next = column_space(a * w);
    const bool stable = next.cols() == w.cols();
    w = std::move(next);
    if (stable || w.cols() == 0) break;
  }
  core.dimension = w.cols();
  if (core.dimension == 0) return core;
  core.matrix = solve_full_column_rank(w, a * w);
  core.invariant_factors = invariant_factors(core.matrix);
  Z5Poly prod = Z5Poly::constant(1);
  for (const auto& f : core.invariant_factors) prod = prod * f;
  if (prod != characteristic_polynomial(core.matrix)) {
    throw InternalError("invariant factors do not multiply to the characteristic polynomial");
  }
  if (prod.coeff(0).is_zero()) throw InternalError("core map is singular");
  core.characteristic = prod;
  return core;
}

// -------------------------------------------------------------- the index

std::string ConleyIndex::to_string() const { return "(" + p_string(0) + ", " + p_string(1) + ")"; }

bool ConleyIndex::equivalent(const ConleyIndex& other) const {
  return cores[0].invariant_factors == other.cores[0].invariant_factors &&
         cores[1].invariant_factors == other.cores[1].invariant_factors;
}

ConleyIndex conley_index(const IndexPairCells& pair, const ChainSelector& s, const Digraph& g) {
  const RelativeHomology h = relative_homology(pair);
  ConleyIndex ci;
  ci.homology_dims = {h.dim0(), h.dim1()};
  ci.maps = index_map(pair, h, s, g);
  for (int k = 0; k < 2; ++k) ci.cores[static_cast<std::size_t>(k)] = invertible_core(ci.maps[static_cast<std::size_t>(k)]);
  return ci;
}

ConleyIndex conley_index(const MorseGraph& mg, const Digraph& g, const ChainSelector& s, std::size_t node) {
  return conley_index(index_pair(mg, g, node), s, g);
}

ConleyIndex direct_sum(const ConleyIndex& a, const ConleyIndex& b) {
  ConleyIndex out;
  for (std::size_t k = 0; k < 2; ++k) {
    out.maps[k] = block_diagonal(a.maps[k], b.maps[k]);
    out.cores[k] = invertible_core(block_diagonal(a.cores[k].matrix, b.cores[k].matrix));
    out.homology_dims[k] = a.homology_dims[k] + b.homology_dims[k];
  }
  return out;
}

// ---------------------------------------------------------- classification

std::string Classification::to_string() const {
  switch (kind) {
    case Kind::trivial: return "trivial";
    case Kind::fixed_point: return "fixed_point";
    case Kind::periodic: return "periodic(" + std::to_string(period) + ")";
    case Kind::nontrivial_other: return "nontrivial_other";
  }
  return "trivial";
}

Classification Classification::parse(const std::string& text) {
  if (text == "trivial") return {Kind::trivial, 0};
  if (text == "fixed_point") return {Kind::fixed_point, 1};
  if (text == "nontrivial_other") return {Kind::nontrivial_other, 0};
  if (text.rfind("periodic(", 0) == 0 && text.size() > 10 && text.back() == ')') {
    return {Kind::periodic, static_cast<std::size_t>(std::stoul(text.substr(9, text.size() - 10)))};
  }
  throw DataError("unknown classification '" + text + "'");
}

bool is_cyclic_form(const Z5Poly& p, std::size_t& period) {
  if (p.degree() < 1 || p.leading() != Z5(1)) return false;
  const int c0 = p.coeff(0).lifted();
  if (c0 != 1 && c0 != -1) return false;
  for (int k = 1; k < p.degree(); ++k)
    if (!p.coeff(static_cast<std::size_t>(k)).is_zero()) return false;
  period = static_cast<std::size_t>(p.degree());
  return true;
}

Classification interpret(const ConleyIndex& index) {
  const bool t0 = index.p(0).is_zero(), t1 = index.p(1).is_zero();
  if (t0 && t1) return {Classification::Kind::trivial, 0};
  if (t0 != t1) {
    std::size_t period = 0;
    if (is_cyclic_form(t0 ? index.p(1) : index.p(0), period)) {
      return period == 1 ? Classification{Classification::Kind::fixed_point, 1}
                         : Classification{Classification::Kind::periodic, period};
    }
  }
  return {Classification::Kind::nontrivial_other, 0};
}

// ---------------------------------------------------------- connections

ConnectionResult connecting_orbit(const MorseGraph& mg, const Digraph& g, const ChainSelector& s,
                                  std::size_t upper, std::size_t lower,
                                  const ConleyIndex& upper_index, const ConleyIndex& lower_index) {
  const auto& cov = mg.covers.at(upper);
  if (std::find(cov.begin(), cov.end(), lower) == cov.end()) {
    throw ConfigError(mg.nodes.at(upper).label + " does not cover " + mg.nodes.at(lower).label);
  }
  ConnectionResult res;
  res.upper = upper;
  res.lower = lower;
  res.combined = conley_index(make_index_pair(nu(mg, g, upper), pred(mg, g, lower)), s, g);
  res.sum = direct_sum(upper_index, lower_index);
  res.connecting = !res.combined.equivalent(res.sum);
  return res;
}

ConnectionResult connecting_orbit(const MorseGraph& mg, const Digraph& g, const ChainSelector& s,
                                  std::size_t upper, std::size_t lower) {
  return connecting_orbit(mg, g, s, upper, lower, conley_index(mg, g, s, upper), conley_index(mg, g, s, lower));
}

}  // namespace conleygp
