#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "radiomap/graph.hpp"
#include "radiomap/scene_gen.hpp"

using namespace radiomap;

namespace {

using EdgeKey = std::pair<int, int>;

std::map<EdgeKey, EdgeAttr> edge_map(const EdgeSet& es) {
  std::map<EdgeKey, EdgeAttr> m;
  for (std::size_t e = 0; e < es.size(); ++e) {
    const bool inserted = m.emplace(EdgeKey{es.senders[e], es.receivers[e]}, es.attrs[e]).second;
    EXPECT_TRUE(inserted) << "duplicate edge " << es.senders[e] << "->" << es.receivers[e];
  }
  return m;
}

// Node id after rotating the pixel 90 degrees about the antenna.
int rotate_node(int id, int n, Pixel a) {
  const int dc = id % n - a.col;
  const int dr = id / n - a.row;
  return (a.row + dc) * n + (a.col - dr);
}

}  // namespace

TEST(Polar, Examples) {
  const auto p = node_polar(9, 9, {4, 4}, 5.0);
  EXPECT_EQ(p[4 * 9 + 4].r, 0.0);
  EXPECT_EQ(p[4 * 9 + 4].theta, 0.0);
  EXPECT_DOUBLE_EQ(p[4 * 9 + 5].r, 5.0);
  EXPECT_DOUBLE_EQ(p[4 * 9 + 5].theta, 0.0);
  const auto& q = p[8 * 9 + 7];
  EXPECT_NEAR(q.r, 25.0, 1e-12);
  EXPECT_NEAR(q.theta, 0.9273, 1e-4);
  EXPECT_NEAR(q.theta, std::atan2(4.0, 3.0), 1e-15);
}

TEST(Polar, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(std::numbers::pi), std::numbers::pi);
  EXPECT_DOUBLE_EQ(wrap_angle(-std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(wrap_angle(3 * std::numbers::pi / 2), -std::numbers::pi / 2, 1e-15);
  for (double a = -20.0; a < 20.0; a += 0.01) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -std::numbers::pi);
    EXPECT_LE(w, std::numbers::pi);
  }
}

TEST(GridEdges, ThreeByThree) {
  const auto p = node_polar(3, 3, {1, 1}, 5.0);
  EXPECT_EQ(build_grid_edges(3, 3, p).size(), 24u);
}

TEST(GridEdges, IntoAntennaFromEast) {
  const auto p = node_polar(5, 5, {2, 2}, 5.0);
  const auto m = edge_map(build_grid_edges(5, 5, p));
  const auto& e = m.at({2 * 5 + 3, 2 * 5 + 2});
  EXPECT_DOUBLE_EQ(e.dr, -5.0);
  EXPECT_EQ(e.dtheta, 0.0);
}

TEST(GridEdges, CountsMatchEnumeration) {
  for (int w = 3; w <= 8; ++w)
    for (int h = 3; h <= 8; ++h) {
      std::set<EdgeKey> expected;
      for (int a = 0; a < w * h; ++a)
        for (int b = 0; b < w * h; ++b)
          if (std::abs(a % w - b % w) + std::abs(a / w - b / w) == 1) expected.insert({a, b});
      const auto es = build_grid_edges(w, h, node_polar(w, h, center_pixel(w, h), 5.0));
      std::set<EdgeKey> got;
      for (std::size_t e = 0; e < es.size(); ++e) got.insert({es.senders[e], es.receivers[e]});
      EXPECT_EQ(es.size(), static_cast<std::size_t>(2 * (2 * w * h - w - h))) << w << "x" << h;
      EXPECT_EQ(got, expected) << w << "x" << h;
    }
}

TEST(RayEdges, ThreeByThreeAllFromAntenna) {
  const auto es = build_ray_edges(3, 3, {1, 1}, node_polar(3, 3, {1, 1}, 5.0));
  ASSERT_EQ(es.size(), 8u);
  for (std::size_t e = 0; e < es.size(); ++e) EXPECT_EQ(es.senders[e], 4);
}

TEST(RayEdges, CollinearStepEast) {
  const auto es = build_ray_edges(7, 7, {3, 3}, node_polar(7, 7, {3, 3}, 5.0));
  const auto m = edge_map(es);
  const auto& e = m.at({3 * 7 + 4, 3 * 7 + 5});
  EXPECT_DOUBLE_EQ(e.dr, 5.0);
  EXPECT_EQ(e.dtheta, 0.0);
}

TEST(RayEdges, CountsMatchEnumeration) {
  for (int w = 3; w <= 8; ++w)
    for (int h = 3; h <= 8; ++h) {
      const Pixel a = center_pixel(w, h);
      const auto es = build_ray_edges(w, h, a, node_polar(w, h, a, 5.0));
      EXPECT_EQ(es.size(), static_cast<std::size_t>(w * h - 1)) << w << "x" << h;
      std::vector<int> incoming(static_cast<std::size_t>(w * h), 0);
      for (std::size_t e = 0; e < es.size(); ++e) {
        const int s = es.senders[e], r = es.receivers[e];
        ++incoming[static_cast<std::size_t>(r)];
        const int rc = std::max(std::abs(r % w - a.col), std::abs(r / w - a.row));
        const int sc = std::max(std::abs(s % w - a.col), std::abs(s / w - a.row));
        EXPECT_EQ(sc, rc - 1);
        EXPECT_LE(std::abs(s % w - r % w), 1);
        EXPECT_LE(std::abs(s / w - r / w), 1);
      }
      for (int i = 0; i < w * h; ++i)
        EXPECT_EQ(incoming[static_cast<std::size_t>(i)], i == a.row * w + a.col ? 0 : 1);
    }
}

TEST(RayEdges, StrideAndBidirectional) {
  const Pixel a{4, 4};
  const auto p = node_polar(9, 9, a, 5.0);
  const auto es = build_ray_edges(9, 9, a, p, 2, true);
  EXPECT_EQ(es.size(), 2u * 80u);
  for (std::size_t e = 0; e < es.size(); e += 2) {
    const int s = es.senders[e], r = es.receivers[e];
    EXPECT_EQ(es.senders[e + 1], r);
    EXPECT_EQ(es.receivers[e + 1], s);
    const int rc = std::max(std::abs(r % 9 - 4), std::abs(r / 9 - 4));
    const int sc = std::max(std::abs(s % 9 - 4), std::abs(s / 9 - 4));
    EXPECT_EQ(sc, std::max(rc - 2, 0));
  }
  EXPECT_THROW(build_ray_edges(9, 9, a, p, 0), Error);
}

TEST(Rotation, EdgeSetsMapOntoThemselves) {
  for (int n : {3, 5, 7, 9, 15}) {
    const Pixel a = center_pixel(n, n);
    const auto p = node_polar(n, n, a, 5.0);
    for (const EdgeSet& es : {build_grid_edges(n, n, p), build_ray_edges(n, n, a, p)}) {
      const auto m = edge_map(es);
      for (const auto& [key, attr] : m) {
        const EdgeKey rk{rotate_node(key.first, n, a), rotate_node(key.second, n, a)};
        const auto it = m.find(rk);
        ASSERT_NE(it, m.end()) << n << ": rotated edge missing";
        EXPECT_NEAR(it->second.dr, attr.dr, 1e-12);
        EXPECT_NEAR(it->second.dtheta, attr.dtheta, 1e-12);
      }
    }
  }
}

TEST(Rotation, DeltaThetaInRange) {
  const Scene s = generate_scene(3);
  const auto g = assemble_graph(s, {true, true, 1});
  for (const EdgeSet* es : {&g.grid_edges, &g.ray_edges})
    for (const auto& at : es->attrs) {
      EXPECT_GT(at.dtheta, -std::numbers::pi);
      EXPECT_LE(at.dtheta, std::numbers::pi);
    }
}

TEST(Assemble, EmptySceneFeatures) {
  Scene s = empty_scene(9, 9);
  s.antenna.pattern = sector_pattern();
  const auto g = assemble_graph(s);
  ASSERT_EQ(g.num_nodes(), 81u);
  EXPECT_EQ(g.antenna_node, 40);
  const auto att = antenna_attenuation_map(s);
  bool varies = false;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    EXPECT_EQ(g.node_features[i].size(), 4u);
    for (int f = 0; f < 3; ++f) EXPECT_EQ(g.node_features[i][f], g.node_features[0][f]);
    EXPECT_EQ(g.node_features[i][3], att[i]);
    varies |= g.node_features[i][3] != g.node_features[0][3];
  }
  EXPECT_TRUE(varies);
}

TEST(Assemble, EdgesIgnoreObstacles) {
  const Scene a = generate_scene(1);
  Scene b = a;
  b.ground_type = generate_scene(2).ground_type;
  b.obstacle_height = generate_scene(2).obstacle_height;
  const auto ga = assemble_graph(a);
  const auto gb = assemble_graph(b);
  EXPECT_EQ(edges_to_csv(ga.grid_edges), edges_to_csv(gb.grid_edges));
  EXPECT_EQ(edges_to_csv(ga.ray_edges), edges_to_csv(gb.ray_edges));
  EXPECT_NE(ga.node_features, gb.node_features);
}

TEST(Assemble, RayEdgesOptional) {
  const auto g = assemble_graph(generate_scene(1), {false, false, 1});
  EXPECT_TRUE(g.ray_edges.empty());
  EXPECT_EQ(g.grid_edges.size(), static_cast<std::size_t>(2 * (2 * 64 * 64 - 128)));
}
