#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "qwalkvec/graph.hpp"
#include "test_support.hpp"

using namespace qwalkvec;

TEST(LoadEdgeList, SmallStar) {
  auto g = load_edge_list("0 1\n0 2");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 1u);
  EXPECT_EQ(g.degree(2), 1u);
}

TEST(LoadEdgeList, Karate) {
  auto g = fixtures::karate();
  EXPECT_EQ(g.node_count(), 34u);
  EXPECT_EQ(g.edge_count(), 78u);
}

TEST(LoadEdgeList, SelfLoopDropped) {
  load_report rep;
  auto g = load_edge_list("0 0\n0 1", &rep);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(rep.self_loops_dropped, 1u);
}

TEST(LoadEdgeList, DuplicatesAndReversedDuplicatesDropped) {
  load_report rep;
  auto g = load_edge_list("# header\n5 9\n9 5\n5 9\n\n9 7\n", &rep);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(rep.duplicates_dropped, 2u);
  EXPECT_EQ(rep.comment_lines, 1u);
}

TEST(LoadEdgeList, RemapsInFirstAppearanceOrder) {
  auto g = load_edge_list("10 3\n3 7\n");
  ASSERT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.original_id(0), 10);
  EXPECT_EQ(g.original_id(1), 3);
  EXPECT_EQ(g.original_id(2), 7);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(LoadEdgeList, MalformedTokenReportsLine) {
  try {
    load_edge_list("0 1\n1 x\n");
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_edge_list("0 1 2\n"), parse_error);
  EXPECT_THROW(load_edge_list("-1 2\n"), parse_error);
}

TEST(LoadEdgeList, EmptyEdgeSetIsError) {
  EXPECT_THROW(load_edge_list("# nothing here\n"), data_error);
  EXPECT_THROW(load_edge_list(""), data_error);
  EXPECT_THROW(load_edge_list("3 3\n"), data_error);
}

TEST(LoadEdgeList, ReloadIsIdempotent) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = fixtures::random_graph(rng, 2, 30, 0.15);
    auto once = load_edge_list(serialize_edge_list(g));
    auto twice = load_edge_list(serialize_edge_list(once));
    EXPECT_EQ(once, twice);
  }
}

TEST(Graph, InvariantsOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = fixtures::random_graph(rng, 1, 40, 0.1, trial % 2 == 0);
    std::size_t degree_sum = 0;
    for (node_id i = 0; i < g.node_count(); ++i) {
      auto nbrs = g.neighbors(i);
      degree_sum += nbrs.size();
      EXPECT_TRUE(std::is_sorted(nbrs.begin(), nbrs.end()));
      EXPECT_EQ(std::adjacent_find(nbrs.begin(), nbrs.end()), nbrs.end());
      for (auto j : nbrs) {
        EXPECT_NE(i, j);
        EXPECT_TRUE(g.has_edge(j, i));
      }
    }
    EXPECT_EQ(degree_sum, 2 * g.edge_count());
  }
}

TEST(LoadLabels, Densifies) {
  auto g = load_edge_list("0 1\n1 2\n");
  auto labels = load_labels("0 7\n1 7\n2 9\n", g);
  EXPECT_EQ(labels.label_count, 2);
  EXPECT_EQ(labels.labels, (std::vector<int>{0, 0, 1}));
}

TEST(LoadLabels, Karate) {
  auto g = fixtures::karate();
  auto labels = fixtures::karate_labels(g);
  EXPECT_EQ(labels.label_count, 2);
  EXPECT_EQ(labels.size(), 34u);
}

TEST(LoadLabels, Errors) {
  auto g = load_edge_list("0 1\n1 2\n");
  EXPECT_THROW(load_labels("0 1\n1 2\n", g), data_error);             // node 2 missing
  EXPECT_THROW(load_labels("0 1\n1 2\n1 3\n2 1\n", g), parse_error);  // duplicate
  EXPECT_THROW(load_labels("0 1\n1 2\n2 1\n5 1\n", g), parse_error);  // unknown
  EXPECT_THROW(load_labels("0 1\n1 1\n2 1\n", g), data_error);        // single label
}

TEST(Bfs, PathAndIsolated) {
  auto path = fixtures::path_graph(3);
  auto d = bfs_distances(path, 0);
  EXPECT_EQ(d.dist[0], 0u);
  EXPECT_EQ(d.dist[1], 1u);
  EXPECT_EQ(d.dist[2], 2u);

  auto g = fixtures::from_edges(3, {{0, 1}});
  auto d2 = bfs_distances(g, 0);
  EXPECT_EQ(d2.dist[1], 1u);
  EXPECT_FALSE(d2.reachable(2));
  EXPECT_THROW(bfs_distances(g, 3), std::out_of_range);
}

TEST(Bfs, KarateMatchesFloydWarshall) {
  auto g = fixtures::karate();
  const auto n = g.node_count();
  constexpr int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> fw(n, std::vector<int>(n, inf));
  for (node_id i = 0; i < n; ++i) {
    fw[i][i] = 0;
    for (auto j : g.neighbors(i)) fw[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) fw[i][j] = std::min(fw[i][j], fw[i][k] + fw[k][j]);
  for (node_id s = 0; s < n; ++s) {
    auto d = bfs_distances(g, s);
    for (node_id v = 0; v < n; ++v) EXPECT_EQ(static_cast<int>(*d.dist[v]), fw[s][v]);
  }
  auto a = fixtures::internal_id(g, 0), b = fixtures::internal_id(g, 33);
  EXPECT_EQ(bfs_distances(g, a).dist[b], bfs_distances(g, b).dist[a]);
}

TEST(Bfs, LayerProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = fixtures::random_graph(rng, 2, 40, 0.08, false);
    for (node_id s = 0; s < g.node_count(); ++s) {
      auto d = bfs_distances(g, s);
      for (node_id i = 0; i < g.node_count(); ++i)
        for (auto j : g.neighbors(i)) {
          ASSERT_EQ(d.reachable(i), d.reachable(j));
          if (d.reachable(i)) { EXPECT_LE(std::abs(int(*d.dist[i]) - int(*d.dist[j])), 1); }
        }
    }
  }
}
