#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "conleygp/grid.hpp"

namespace conleygp {

struct FiberTable;

/// Sorted, duplicate-free set of top-cell (edge) indices.
using CellSet = std::vector<std::size_t>;

/// Directed graph whose vertex v points at every vertex of a contiguous range.
class Digraph {
 public:
  explicit Digraph(std::vector<EdgeRange> out);
  static Digraph from_fibers(const FiberTable& fibers);

  std::size_t size() const { return out_.size(); }
  const EdgeRange& out(std::size_t v) const { return out_[v]; }
  bool has_edge(std::size_t u, std::size_t v) const { return out_[u].contains(v); }
  /// Total number of arcs.
  std::size_t arc_count() const;

 private:
  std::vector<EdgeRange> out_;
};

struct Condensation {
  /// Component id of each vertex. Ids are in reverse topological order: every
  /// arc u -> v satisfies component[u] >= component[v].
  std::vector<std::size_t> component;
  /// Sorted members of each component.
  std::vector<CellSet> members;

  std::size_t size() const { return members.size(); }
};

/// Tarjan's algorithm adapted to range adjacency: unvisited targets are found
/// through a next-unvisited forest and on-stack lowlinks through a range-min
/// tree, so the cost is O((V + E_ranges) log V) rather than O(#arcs).
Condensation scc_condense(const Digraph& g);

/// Deduplicated arcs between distinct components. Enumerates every arc, so
/// meant for small graphs.
std::vector<std::vector<std::size_t>> condensation_arcs(const Digraph& g, const Condensation& c);

struct MorseNode {
  CellSet cells;
  std::string label;
  /// nu(node): every cell reachable from the node.
  CellSet attractor;
};

/// Recurrent components ordered by leftmost cell, with reachability order.
struct MorseGraph {
  std::vector<MorseNode> nodes;
  /// below[i]: nodes j != i reachable from node i, ascending.
  std::vector<std::vector<std::size_t>> below;
  /// covers[i]: nodes j immediately below i.
  std::vector<std::vector<std::size_t>> covers;

  std::size_t size() const { return nodes.size(); }
  bool less(std::size_t a, std::size_t b) const;  ///< a strictly below b
  std::vector<std::size_t> minimal() const;
  std::vector<std::size_t> maximal() const;
};

MorseGraph morse_graph(const Digraph& g);
MorseGraph morse_graph(const Digraph& g, const Condensation& c);

/// F(A) as a cell set.
CellSet image(const Digraph& g, const CellSet& cells);
bool is_attractor(const Digraph& g, const CellSet& cells);
/// Every cell reachable from `seeds` (the seeds included).
CellSet forward_closure(const Digraph& g, const CellSet& seeds);

/// Smallest attractor containing the node. Throws InternalError if the
/// result is not invariant.
CellSet nu(const MorseGraph& mg, const Digraph& g, std::size_t node);
/// Union of nu over the nodes strictly below.
CellSet pred(const MorseGraph& mg, const Digraph& g, std::size_t node);

/// Closure (downset) of a set of edges in the 1D complex: the edges plus
/// their endpoint vertices.
struct CellClosure {
  CellSet edges;
  std::vector<std::size_t> vertices;
};
CellClosure closure(const CellSet& edges);

struct IndexPairCells {
  CellSet a1;
  CellSet a0;
  CellClosure closure1;
  CellClosure closure0;
};

IndexPairCells make_index_pair(CellSet a1, CellSet a0);
IndexPairCells index_pair(const MorseGraph& mg, const Digraph& g, std::size_t node);
/// (nu(M), nu(M) minus M): also an index pair for M, with the transient
/// cells of nu(M) moved into the exit set. Same Conley index, larger
/// homology when M splits into many intervals.
IndexPairCells downset_index_pair(const MorseGraph& mg, std::size_t node);

/// Maximal closed intervals covered by the cells.
std::vector<Interval> morse_set_intervals(const CellComplex1D& complex, const CellSet& cells);
/// "[0.09179688, 0.27929688] U [...]" with eight decimals.
std::string format_intervals(const std::vector<Interval>& intervals);

/// All invariant sets F(A) = A (including the empty set), as bitmasks.
/// Exhaustive, limited to 18 vertices; intended for testing.
std::vector<std::uint32_t> enumerate_attractors(const Digraph& g);

// Set helpers on sorted cell sets.
CellSet set_union(const CellSet& a, const CellSet& b);
CellSet set_intersection(const CellSet& a, const CellSet& b);
CellSet set_difference(const CellSet& a, const CellSet& b);
bool is_subset(const CellSet& a, const CellSet& b);

}  // namespace conleygp
