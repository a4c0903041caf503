#include "conleygp/morse.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>

#include "conleygp/enclosure.hpp"
#include "conleygp/error.hpp"

namespace conleygp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// nxt[i] = smallest unmarked index >= i; index n is a permanent sentinel.
class NextFree {
 public:
  explicit NextFree(std::size_t n) : nxt_(n + 1) { std::iota(nxt_.begin(), nxt_.end(), 0); }

  std::size_t find(std::size_t i) {
    std::size_t r = i;
    while (nxt_[r] != r) r = nxt_[r];
    while (nxt_[i] != r) {
      const std::size_t up = nxt_[i];
      nxt_[i] = r;
      i = up;
    }
    return r;
  }
  void mark(std::size_t i) { nxt_[i] = i + 1; }

 private:
  std::vector<std::size_t> nxt_;
};

class RangeMin {
 public:
  explicit RangeMin(std::size_t n) : size_(1) {
    while (size_ < n) size_ <<= 1;
    tree_.assign(2 * size_, kNone);
  }
  void set(std::size_t i, std::size_t v) {
    i += size_;
    tree_[i] = v;
    for (i >>= 1; i >= 1; i >>= 1) tree_[i] = std::min(tree_[2 * i], tree_[2 * i + 1]);
  }
  std::size_t query(std::size_t lo, std::size_t hi) const {  // inclusive
    std::size_t best = kNone;
    std::size_t l = lo + size_, r = hi + size_ + 1;
    while (l < r) {
      if (l & 1) best = std::min(best, tree_[l++]);
      if (r & 1) best = std::min(best, tree_[--r]);
      l >>= 1;
      r >>= 1;
    }
    return best;
  }

 private:
  std::size_t size_;
  std::vector<std::size_t> tree_;
};

}  // namespace

// ------------------------------------------------------------------ digraph

Digraph::Digraph(std::vector<EdgeRange> out) : out_(std::move(out)) {
  for (std::size_t v = 0; v < out_.size(); ++v) {
    if (out_[v].empty() || out_[v].last >= out_.size()) {
      throw InternalError("vertex " + std::to_string(v) + " has an empty or out-of-range image");
    }
  }
}

Digraph Digraph::from_fibers(const FiberTable& fibers) { return Digraph(fibers.image); }

std::size_t Digraph::arc_count() const {
  std::size_t n = 0;
  for (const auto& r : out_) n += r.size();
  return n;
}

Condensation scc_condense(const Digraph& g) {
  const std::size_t n = g.size();
  Condensation out;
  out.component.assign(n, kNone);
  if (n == 0) return out;

  std::vector<std::size_t> index(n, kNone), low(n, 0);
  NextFree unvisited(n);
  RangeMin on_stack(n);
  std::vector<std::size_t> stack, frames;
  std::size_t counter = 0;

  auto visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    unvisited.mark(v);
    on_stack.set(v, index[v]);
    stack.push_back(v);
    frames.push_back(v);
  };

  for (std::size_t root = unvisited.find(0); root < n; root = unvisited.find(root)) {
    visit(root);
    while (!frames.empty()) {
      const std::size_t v = frames.back();
      const EdgeRange& r = g.out(v);
      const std::size_t w = unvisited.find(r.first);
      if (w <= r.last) {
        visit(w);
        continue;
      }
      low[v] = std::min(low[v], on_stack.query(r.first, r.last));
      frames.pop_back();
      if (low[v] == index[v]) {
        CellSet members;
        std::size_t x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack.set(x, kNone);
          out.component[x] = out.members.size();
          members.push_back(x);
        } while (x != v);
        std::sort(members.begin(), members.end());
        out.members.push_back(std::move(members));
      }
      if (!frames.empty()) low[frames.back()] = std::min(low[frames.back()], low[v]);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> condensation_arcs(const Digraph& g, const Condensation& c) {
  std::vector<std::vector<std::size_t>> arcs(c.size());
  std::vector<std::size_t> seen(c.size(), kNone);
  for (std::size_t comp = 0; comp < c.size(); ++comp) {
    for (auto v : c.members[comp]) {
      const EdgeRange& r = g.out(v);
      for (std::size_t w = r.first; w <= r.last; ++w) {
        const std::size_t t = c.component[w];
        if (t != comp && seen[t] != comp) {
          seen[t] = comp;
          arcs[comp].push_back(t);
        }
      }
    }
    std::sort(arcs[comp].begin(), arcs[comp].end());
  }
  return arcs;
}

// ------------------------------------------------------------- attractors

CellSet image(const Digraph& g, const CellSet& cells) {
  std::vector<int> diff(g.size() + 1, 0);
  for (auto c : cells) {
    ++diff[g.out(c).first];
    --diff[g.out(c).last + 1];
  }
  CellSet out;
  int run = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    run += diff[i];
    if (run > 0) out.push_back(i);
  }
  return out;
}

bool is_attractor(const Digraph& g, const CellSet& cells) { return image(g, cells) == cells; }

CellSet forward_closure(const Digraph& g, const CellSet& seeds) {
  NextFree unvisited(g.size());
  std::vector<std::size_t> queue;
  for (auto s : seeds) {
    if (unvisited.find(s) == s) {
      unvisited.mark(s);
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const EdgeRange& r = g.out(queue[head]);
    for (std::size_t w = unvisited.find(r.first); w <= r.last; w = unvisited.find(w)) {
      unvisited.mark(w);
      queue.push_back(w);
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

// ------------------------------------------------------------ morse graph

bool MorseGraph::less(std::size_t a, std::size_t b) const {
  return std::binary_search(below[b].begin(), below[b].end(), a);
}

std::vector<std::size_t> MorseGraph::minimal() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (below[i].empty()) out.push_back(i);
  return out;
}

std::vector<std::size_t> MorseGraph::maximal() const {
  std::vector<std::uint8_t> has_above(size(), 0);
  for (std::size_t i = 0; i < size(); ++i)
    for (auto j : below[i]) has_above[j] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (!has_above[i]) out.push_back(i);
  return out;
}

MorseGraph morse_graph(const Digraph& g) { return morse_graph(g, scc_condense(g)); }

MorseGraph morse_graph(const Digraph& g, const Condensation& c) {
  MorseGraph mg;
  for (const CellSet& m : c.members) {
    const bool recurrent = m.size() >= 2 || g.has_edge(m[0], m[0]);
    if (recurrent) mg.nodes.push_back({m, "", {}});
  }
  std::sort(mg.nodes.begin(), mg.nodes.end(),
            [](const MorseNode& a, const MorseNode& b) { return a.cells[0] < b.cells[0]; });

  const std::size_t k = mg.size();
  std::vector<std::size_t> node_of(g.size(), kNone);
  for (std::size_t i = 0; i < k; ++i) {
    mg.nodes[i].label = "M" + std::to_string(i);
    for (auto v : mg.nodes[i].cells) node_of[v] = i;
  }
  mg.below.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    MorseNode& node = mg.nodes[i];
    node.attractor = forward_closure(g, node.cells);
    if (!is_attractor(g, node.attractor)) {
      throw InternalError("forward closure of " + node.label + " is not invariant");
    }
    for (auto v : node.attractor) {
      const std::size_t j = node_of[v];
      if (j != kNone && j != i && (mg.below[i].empty() || mg.below[i].back() != j)) mg.below[i].push_back(j);
    }
    std::sort(mg.below[i].begin(), mg.below[i].end());
    mg.below[i].erase(std::unique(mg.below[i].begin(), mg.below[i].end()), mg.below[i].end());
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (auto j : mg.below[i]) {
      if (mg.less(i, j)) throw InternalError("Morse order is not antisymmetric");
    }
  }
  mg.covers.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (auto j : mg.below[i]) {
      bool immediate = true;
      for (auto m : mg.below[i]) {
        if (m != j && mg.less(j, m)) {
          immediate = false;
          break;
        }
      }
      if (immediate) mg.covers[i].push_back(j);
    }
  }
  return mg;
}

CellSet nu(const MorseGraph& mg, const Digraph& g, std::size_t node) {
  const CellSet& a = mg.nodes.at(node).attractor;
  if (!is_attractor(g, a)) throw InternalError("nu(" + mg.nodes[node].label + ") is not invariant");
  return a;
}

CellSet pred(const MorseGraph& mg, const Digraph& g, std::size_t node) {
  CellSet out;
  for (auto j : mg.below.at(node)) out = set_union(out, mg.nodes[j].attractor);
  if (!is_attractor(g, out)) throw InternalError("pred(" + mg.nodes[node].label + ") is not invariant");
  return out;
}

CellClosure closure(const CellSet& edges) {
  CellClosure c;
  c.edges = edges;
  for (auto e : edges) {
    if (c.vertices.empty() || c.vertices.back() < e) c.vertices.push_back(e);
    c.vertices.push_back(e + 1);
  }
  return c;
}

IndexPairCells make_index_pair(CellSet a1, CellSet a0) {
  if (!is_subset(a0, a1)) throw InternalError("index pair requires A0 inside A1");
  IndexPairCells p;
  p.closure1 = closure(a1);
  p.closure0 = closure(a0);
  p.a1 = std::move(a1);
  p.a0 = std::move(a0);
  return p;
}

IndexPairCells index_pair(const MorseGraph& mg, const Digraph& g, std::size_t node) {
  return make_index_pair(nu(mg, g, node), pred(mg, g, node));
}

IndexPairCells downset_index_pair(const MorseGraph& mg, std::size_t node) {
  const MorseNode& n = mg.nodes.at(node);
  return make_index_pair(n.attractor, set_difference(n.attractor, n.cells));
}

std::vector<Interval> morse_set_intervals(const CellComplex1D& complex, const CellSet& cells) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j + 1 < cells.size() && cells[j + 1] == cells[j] + 1) ++j;
    out.push_back({complex.vertex(cells[i]), complex.vertex(cells[j] + 1)});
    i = j + 1;
  }
  return out;
}

std::string format_intervals(const std::vector<Interval>& intervals) {
  std::string out;
  char buf[96];
  for (const auto& iv : intervals) {
    if (!out.empty()) out += " U ";
    std::snprintf(buf, sizeof buf, "[%.8f, %.8f]", iv.lo, iv.hi);
    out += buf;
  }
  return out;
}

std::vector<std::uint32_t> enumerate_attractors(const Digraph& g) {
  const std::size_t n = g.size();
  if (n > 18) throw ConfigError("exhaustive attractor enumeration is limited to 18 cells");
  std::vector<std::uint32_t> range_mask(n);
  for (std::size_t v = 0; v < n; ++v) {
    const EdgeRange& r = g.out(v);
    range_mask[v] = ((std::uint32_t{1} << (r.last + 1)) - 1) & ~((std::uint32_t{1} << r.first) - 1);
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    std::uint32_t img = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1U) img |= range_mask[v];
    if (img == mask) out.push_back(mask);
  }
  return out;
}

CellSet set_union(const CellSet& a, const CellSet& b) {
  CellSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

CellSet set_intersection(const CellSet& a, const CellSet& b) {
  CellSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

CellSet set_difference(const CellSet& a, const CellSet& b) {
  CellSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const CellSet& a, const CellSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace conleygp
