#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "conleygp/error.hpp"
#include "conleygp/morse.hpp"
#include "conleygp/zmod.hpp"

namespace conleygp {

/// Relative cellular chain complex of (closure1, closure0) over Z5:
/// boundary maps basis1 (edges) to basis0 (vertices), e -> head - tail.
struct RelativePair {
  std::vector<std::size_t> basis1;
  std::vector<std::size_t> basis0;
  Z5Matrix boundary;
};

/// Dense explicit form; sized |basis0| x |basis1|, so for small pairs only.
RelativePair relative_chain_complex(const IndexPairCells& pair);

/// Relative homology of a 1D pair, computed from its interval structure.
///
/// Each connected component of closure1 is an interval of edges. One with no
/// A0 edges contributes a class to H0; one meeting A0 in k separate runs
/// contributes k - 1 classes to H1, one per stretch between consecutive runs.
struct RelativeHomology {
  struct Component {
    std::size_t first_edge = 0;
    std::size_t last_edge = 0;
    std::size_t a0_runs = 0;
  };
  /// A relative 1-cycle: the edges first_edge..last_edge oriented rightwards.
  struct Gap {
    std::size_t first_edge = 0;
    std::size_t last_edge = 0;
  };

  std::vector<Component> components;
  /// Components generating H0, ascending.
  std::vector<std::size_t> h0;
  std::vector<Gap> h1;

  std::size_t dim0() const { return h0.size(); }
  std::size_t dim1() const { return h1.size(); }

  /// H0 coordinate of the class of vertex v (none when v is homologous to A0).
  std::optional<std::size_t> h0_coordinate(std::size_t vertex) const;
  /// H1 coordinates of the oriented path of edges from vertex p to vertex q,
  /// which must be a relative cycle.
  std::vector<Z5> h1_coordinates(std::size_t p, std::size_t q) const;

  std::size_t component_of_vertex(std::size_t v) const;  ///< npos if not in closure1
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

RelativeHomology relative_homology(const IndexPairCells& pair);

/// Chain-level selector of F: a vertex map phi0 and, for every edge e, the
/// oriented path phi1(e) from phi0(tail) to phi0(head).
struct ChainSelector {
  enum class Rule { leftmost, rightmost };

  std::vector<std::size_t> phi0;  ///< per vertex, the chosen image vertex

  std::size_t edge_count() const { return phi0.empty() ? 0 : phi0.size() - 1; }
  /// Endpoints of phi1(e); the chain is +edges [from, to) when from < to,
  /// -edges [to, from) when to < from, zero when equal.
  std::size_t path_from(std::size_t e) const { return phi0[e]; }
  std::size_t path_to(std::size_t e) const { return phi0[e + 1]; }
};

class AcyclicityError : public Error {
 public:
  explicit AcyclicityError(std::size_t vertex);
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

/// phi0(v) is the leftmost (or rightmost) vertex of the intersection of the
/// supports of F over the edges incident to v.
ChainSelector build_selector(const Digraph& g, ChainSelector::Rule rule = ChainSelector::Rule::leftmost);

/// Checks supports and the chain-map identity  d phi1(e) = phi0(head) - phi0(tail)
/// by expanding every phi1(e); throws InternalError on failure.
void verify_selector(const ChainSelector& s, const Digraph& g);

/// Matrices of the induced map on H0 and H1 of the pair.
std::array<Z5Matrix, 2> index_map(const IndexPairCells& pair, const RelativeHomology& h,
                                  const ChainSelector& s, const Digraph& g);

struct InvertibleCore {
  std::size_t dimension = 0;
  Z5Matrix matrix;
  Z5Poly characteristic;  ///< zero polynomial when dimension is 0
  std::vector<Z5Poly> invariant_factors;
};

/// Restricts the map to the stable image im(A^n), where it is invertible.
InvertibleCore invertible_core(const Z5Matrix& a);

struct ConleyIndex {
  std::array<Z5Matrix, 2> maps;
  std::array<InvertibleCore, 2> cores;
  std::array<std::size_t, 2> homology_dims{0, 0};

  const Z5Poly& p(int k) const { return cores[static_cast<std::size_t>(k)].characteristic; }
  std::string p_string(int k) const { return p(k).to_string(); }
  /// "(x - 1, 0)"
  std::string to_string() const;
  /// Same shift-equivalence class: equal invariant factors in each dimension.
  bool equivalent(const ConleyIndex& other) const;
};

ConleyIndex conley_index(const IndexPairCells& pair, const ChainSelector& s, const Digraph& g);
ConleyIndex conley_index(const MorseGraph& mg, const Digraph& g, const ChainSelector& s, std::size_t node);

/// Direct sum: block-diagonal maps and cores.
ConleyIndex direct_sum(const ConleyIndex& a, const ConleyIndex& b);

struct Classification {
  enum class Kind { trivial, fixed_point, periodic, nontrivial_other };
  Kind kind = Kind::trivial;
  std::size_t period = 0;  ///< T for periodic, 1 for fixed_point

  std::string to_string() const;  ///< trivial | fixed_point | periodic(T) | nontrivial_other
  static Classification parse(const std::string& text);
  friend bool operator==(const Classification&, const Classification&) = default;
};

/// true if p = x^T + 1 or x^T - 1 for some T >= 1; sets T.
bool is_cyclic_form(const Z5Poly& p, std::size_t& period);
Classification interpret(const ConleyIndex& index);

struct ConnectionResult {
  std::size_t upper = 0;
  std::size_t lower = 0;
  ConleyIndex combined;
  ConleyIndex sum;
  bool connecting = false;
};

/// Compares the index of (nu(upper), pred(lower)) with the direct sum of the
/// two nodes' indices. `lower` must be covered by `upper`.
ConnectionResult connecting_orbit(const MorseGraph& mg, const Digraph& g, const ChainSelector& s,
                                  std::size_t upper, std::size_t lower,
                                  const ConleyIndex& upper_index, const ConleyIndex& lower_index);
ConnectionResult connecting_orbit(const MorseGraph& mg, const Digraph& g, const ChainSelector& s,
                                  std::size_t upper, std::size_t lower);

}  // namespace conleygp
