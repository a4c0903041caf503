#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "conleygp/morse.hpp"
#include "conleygp/rng.hpp"
#include "oracles.hpp"

using namespace conleygp;

namespace {

EdgeRange rng_range(std::size_t a, std::size_t b) {
  EdgeRange r;
  r.first = a;
  r.last = b;
  return r;
}

Digraph from_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& p) {
  std::vector<EdgeRange> out;
  for (auto [a, b] : p) out.push_back(rng_range(a, b));
  return Digraph(out);
}

std::vector<std::pair<std::size_t, std::size_t>> random_ranges(Rng& r, std::size_t n, std::size_t max_width) {
  std::vector<std::pair<std::size_t, std::size_t>> p(n);
  for (auto& [a, b] : p) {
    a = static_cast<std::size_t>(r.uniform() * static_cast<double>(n));
    const auto w = static_cast<std::size_t>(r.uniform() * static_cast<double>(max_width));
    b = std::min(n - 1, a + w);
  }
  return p;
}

oracle::Bool2D adjacency(const Digraph& g) {
  oracle::Bool2D adj(g.size(), std::vector<bool>(g.size(), false));
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::size_t v = 0; v < g.size(); ++v) adj[u][v] = g.has_edge(u, v);
  return adj;
}

std::uint32_t to_mask(const CellSet& s) {
  std::uint32_t m = 0;
  for (auto c : s) m |= 1u << c;
  return m;
}

}  // namespace

TEST(Scc, MatchesTransitiveClosureOracle) {
  Rng r(101);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(r.uniform() * 50);
    const auto g = from_pairs(random_ranges(r, n, 1 + t % 6));
    const auto c = scc_condense(g);
    const auto want = oracle::scc_partition(adjacency(g));
    auto got = c.members;
    std::sort(got.begin(), got.end());
    std::vector<CellSet> w(want.begin(), want.end());
    std::sort(w.begin(), w.end());
    ASSERT_EQ(got, w) << "trial " << t;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (g.has_edge(u, v)) ASSERT_GE(c.component[u], c.component[v]);
  }
}

TEST(Morse, NodesAreRecurrentComponents) {
  Rng r(202);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(r.uniform() * 50);
    const auto g = from_pairs(random_ranges(r, n, 1 + t % 5));
    const auto reach = oracle::transitive_closure(adjacency(g));
    std::vector<CellSet> want;
    for (const auto& comp : oracle::scc_partition(adjacency(g)))
      if (oracle::recurrent(reach, comp)) want.push_back(CellSet(comp.begin(), comp.end()));
    std::sort(want.begin(), want.end());
    const auto mg = morse_graph(g);
    std::vector<CellSet> got;
    for (const auto& node : mg.nodes) got.push_back(node.cells);
    ASSERT_EQ(got, want) << "trial " << t;  // sorted by leftmost cell
    for (std::size_t i = 0; i < mg.size(); ++i)
      for (std::size_t j = 0; j < mg.size(); ++j) {
        const bool below = i != j && reach[mg.nodes[i].cells[0]][mg.nodes[j].cells[0]];
        ASSERT_EQ(mg.less(j, i), below);
      }
  }
}

TEST(Morse, CoversAreTransitiveReduction) {
  Rng r(303);
  for (int t = 0; t < 100; ++t) {
    const auto g = from_pairs(random_ranges(r, 40, 4));
    const auto mg = morse_graph(g);
    for (std::size_t i = 0; i < mg.size(); ++i)
      for (std::size_t j = 0; j < mg.size(); ++j) {
        bool mid = false;
        for (std::size_t k = 0; k < mg.size(); ++k) mid = mid || (mg.less(k, i) && mg.less(j, k));
        const bool cover = mg.less(j, i) && !mid;
        const auto& cv = mg.covers[i];
        ASSERT_EQ(std::find(cv.begin(), cv.end(), j) != cv.end(), cover);
      }
  }
}

TEST(Lattice, NuAndPredMatchEnumeration) {
  Rng r(404);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(r.uniform() * 17);
    const auto ranges = random_ranges(r, n, 3);
    const auto g = from_pairs(ranges);
    const auto att = oracle::all_invariant_sets(ranges);
    auto lib = enumerate_attractors(g);
    std::sort(lib.begin(), lib.end());
    ASSERT_EQ(lib, att);
    const auto mg = morse_graph(g);
    for (std::size_t i = 0; i < mg.size(); ++i) {
      const auto want = oracle::lattice_nu_pred(att, to_mask(mg.nodes[i].cells));
      EXPECT_TRUE(want.unique);
      EXPECT_EQ(to_mask(nu(mg, g, i)), want.nu);
      EXPECT_EQ(to_mask(pred(mg, g, i)), want.pred);
      EXPECT_EQ(nu(mg, g, i), mg.nodes[i].attractor);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Morse, HandFixtureWithTransient) {
  // 0 -> 1, 1 -> 0, 1 -> 2, 2 -> 2
  const auto g = from_pairs({{1, 1}, {0, 2}, {2, 2}});
  const auto mg = morse_graph(g);
  ASSERT_EQ(mg.size(), 2u);
  EXPECT_EQ(mg.nodes[0].cells, (CellSet{0, 1}));
  EXPECT_EQ(mg.nodes[1].cells, (CellSet{2}));
  EXPECT_TRUE(mg.less(1, 0));
  EXPECT_EQ(nu(mg, g, 0), (CellSet{0, 1, 2}));
  EXPECT_EQ(pred(mg, g, 0), (CellSet{2}));
  EXPECT_EQ(pred(mg, g, 1), CellSet{});
  EXPECT_EQ(mg.minimal(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(mg.maximal(), (std::vector<std::size_t>{0}));
}

TEST(Morse, ChainWithoutRecurrenceIsEmpty) {
  const auto g = from_pairs({{1, 1}, {2, 2}, {3, 3}, {3, 3}});
  const auto mg = morse_graph(g);
  ASSERT_EQ(mg.size(), 1u);
  EXPECT_EQ(mg.nodes[0].cells, (CellSet{3}));
  const auto g2 = from_pairs({{1, 1}, {2, 2}, {3, 3}, {2, 2}});
  const auto mg2 = morse_graph(g2);
  ASSERT_EQ(mg2.size(), 1u);
  EXPECT_EQ(mg2.nodes[0].cells, (CellSet{2, 3}));
}

TEST(Morse, BistableShape) {
  // attractors {0} and {4}, repeller {2} between them
  const auto g = from_pairs({{0, 0}, {0, 0}, {1, 3}, {4, 4}, {4, 4}});
  const auto mg = morse_graph(g);
  ASSERT_EQ(mg.size(), 3u);
  EXPECT_EQ(mg.nodes[1].cells, (CellSet{2}));
  EXPECT_EQ(mg.covers[1], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(mg.minimal(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(mg.maximal(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(nu(mg, g, 1), (CellSet{0, 1, 2, 3, 4}));
  EXPECT_EQ(pred(mg, g, 1), (CellSet{0, 4}));
  const auto dp = downset_index_pair(mg, 1);
  EXPECT_EQ(dp.a0, (CellSet{0, 1, 3, 4}));
}

TEST(Morse, DisjointNodesBoundedMeasure) {
  Rng r(505);
  for (int t = 0; t < 50; ++t) {
    const auto g = from_pairs(random_ranges(r, 60, 5));
    const auto mg = morse_graph(g);
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& node : mg.nodes) {
      total += node.cells.size();
      seen.insert(node.cells.begin(), node.cells.end());
      EXPECT_TRUE(is_subset(node.cells, node.attractor));
    }
    EXPECT_EQ(seen.size(), total);
    EXPECT_LE(total, g.size());
  }
}

TEST(Intervals, MergeAndFormat) {
  const CellComplex1D c(Domain::make(0, 1), 9);
  CellSet cells;
  for (std::size_t e = 47; e <= 142; ++e) cells.push_back(e);
  const auto iv = morse_set_intervals(c, cells);
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_EQ(format_intervals(iv), "[0.09179688, 0.27929688]");
  cells.push_back(300);
  cells.push_back(301);
  const auto two = morse_set_intervals(c, cells);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_DOUBLE_EQ(two[1].lo, 300.0 / 512);
  EXPECT_DOUBLE_EQ(two[1].hi, 302.0 / 512);
}

TEST(Closure, EdgesAndVertices) {
  const auto c = closure({2, 3, 7});
  EXPECT_EQ(c.edges, (CellSet{2, 3, 7}));
  EXPECT_EQ(c.vertices, (std::vector<std::size_t>{2, 3, 4, 7, 8}));
}

TEST(Sets, Helpers) {
  const CellSet a{1, 3, 5}, b{3, 4, 5, 6};
  EXPECT_EQ(set_union(a, b), (CellSet{1, 3, 4, 5, 6}));
  EXPECT_EQ(set_intersection(a, b), (CellSet{3, 5}));
  EXPECT_EQ(set_difference(a, b), (CellSet{1}));
  EXPECT_TRUE(is_subset(CellSet{3, 5}, a));
  EXPECT_FALSE(is_subset(b, a));
}
