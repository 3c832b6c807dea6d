#ifndef RADIOMAP_GRAPH_HPP
#define RADIOMAP_GRAPH_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "radiomap/antenna.hpp"
#include "radiomap/error.hpp"
#include "radiomap/line.hpp"
#include "radiomap/scene.hpp"
#include "radiomap/scene_io.hpp"

namespace radiomap {

inline constexpr std::size_t kNodeFeatureDim = 4;
inline constexpr std::size_t kEdgeAttrDim = 2;
inline constexpr std::size_t kScalarDim = 3;

struct NodePolar {
  double r = 0.0;      // meters from the antenna pixel center
  double theta = 0.0;  // radians in (-pi, pi]
};

struct EdgeAttr {
  double dr = 0.0;
  double dtheta = 0.0;
};

struct EdgeSet {
  std::vector<int> senders;
  std::vector<int> receivers;
  std::vector<EdgeAttr> attrs;

  std::size_t size() const { return senders.size(); }
  bool empty() const { return senders.empty(); }
  void clear() {
    senders.clear();
    receivers.clear();
    attrs.clear();
  }
};

struct GraphOptions {
  bool ray_edges = true;
  bool ray_bidirectional = false;
  int ray_stride = 1;
};

using NodeFeatures = std::array<double, kNodeFeatureDim>;

/// Per-pixel nodes (row-major ids) with features
/// [ground type code, obstacle height m, ground height m, pattern loss dB]
/// plus the grid and ray edge sets.
struct PropagationGraph {
  int width = 0;
  int height = 0;
  int antenna_node = 0;
  std::vector<NodeFeatures> node_features;
  std::vector<NodePolar> node_polar;
  EdgeSet grid_edges;
  EdgeSet ray_edges;

  std::size_t num_nodes() const { return node_features.size(); }
};

/// Wraps an angle difference into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

inline std::vector<NodePolar> node_polar(int width, int height, Pixel antenna, double resolution) {
  require(antenna.col >= 0 && antenna.row >= 0 && antenna.col < width && antenna.row < height,
          ErrorCategory::invalid_parameter, "antenna pixel outside grid");
  std::vector<NodePolar> out(static_cast<std::size_t>(width) * height);
  for (int row = 0; row < height; ++row)
    for (int col = 0; col < width; ++col) {
      const int dc = col - antenna.col;
      const int dr = row - antenna.row;
      auto& p = out[static_cast<std::size_t>(row) * width + col];
      if (dc == 0 && dr == 0) continue;
      p.r = resolution * std::hypot(dc, dr);
      p.theta = std::atan2(static_cast<double>(dr), static_cast<double>(dc));
    }
  return out;
}

/// Polar difference receiver minus sender. The antenna node has no defined
/// bearing, so edges touching it carry a zero angle difference.
inline EdgeAttr polar_delta(const NodePolar& send, const NodePolar& recv) {
  EdgeAttr a;
  a.dr = recv.r - send.r;
  a.dtheta = (send.r == 0.0 || recv.r == 0.0) ? 0.0 : wrap_angle(recv.theta - send.theta);
  return a;
}

inline void add_edge(EdgeSet& es, int send, int recv, const std::vector<NodePolar>& polar) {
  es.senders.push_back(send);
  es.receivers.push_back(recv);
  es.attrs.push_back(polar_delta(polar[static_cast<std::size_t>(send)],
                                 polar[static_cast<std::size_t>(recv)]));
}

/// 4-neighbourhood, both directions.
inline EdgeSet build_grid_edges(int width, int height, const std::vector<NodePolar>& polar) {
  require(polar.size() == static_cast<std::size_t>(width) * height, ErrorCategory::shape,
          "polar table does not match grid size");
  EdgeSet es;
  const std::size_t expected = 2 * (2 * static_cast<std::size_t>(width) * height - width - height);
  es.senders.reserve(expected);
  es.receivers.reserve(expected);
  es.attrs.reserve(expected);
  for (int row = 0; row < height; ++row)
    for (int col = 0; col < width; ++col) {
      const int id = row * width + col;
      if (col + 1 < width) {
        add_edge(es, id, id + 1, polar);
        add_edge(es, id + 1, id, polar);
      }
      if (row + 1 < height) {
        add_edge(es, id, id + width, polar);
        add_edge(es, id + width, id, polar);
      }
    }
  return es;
}

/// One incoming edge per non-antenna pixel, from the pixel `stride` steps
/// earlier on the line antenna -> pixel. Geometry only; obstacles are never
/// consulted.
inline EdgeSet build_ray_edges(int width, int height, Pixel antenna,
                               const std::vector<NodePolar>& polar, int stride = 1,
                               bool bidirectional = false) {
  require(polar.size() == static_cast<std::size_t>(width) * height, ErrorCategory::shape,
          "polar table does not match grid size");
  require(stride >= 1, ErrorCategory::invalid_parameter, "ray stride must be >= 1");
  EdgeSet es;
  for (int row = 0; row < height; ++row)
    for (int col = 0; col < width; ++col) {
      if (col == antenna.col && row == antenna.row) continue;
      const Pixel q = line_predecessor(antenna, {col, row}, stride);
      const int send = q.row * width + q.col;
      const int recv = row * width + col;
      add_edge(es, send, recv, polar);
      if (bidirectional) add_edge(es, recv, send, polar);
    }
  return es;
}

inline PropagationGraph assemble_graph(const Scene& scene, const GraphOptions& options = {}) {
  validate(scene);
  const int w = scene.width();
  const int h = scene.height();
  PropagationGraph g;
  g.width = w;
  g.height = h;
  g.antenna_node = scene.antenna.pixel.row * w + scene.antenna.pixel.col;

  const RasterGrid att = antenna_attenuation_map(scene);
  g.node_features.resize(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < g.node_features.size(); ++i)
    g.node_features[i] = {scene.ground_type[i], scene.obstacle_height[i], scene.ground_height[i],
                          att[i]};

  g.node_polar = node_polar(w, h, scene.antenna.pixel, scene.resolution());
  g.grid_edges = build_grid_edges(w, h, g.node_polar);
  if (options.ray_edges)
    g.ray_edges = build_ray_edges(w, h, scene.antenna.pixel, g.node_polar, options.ray_stride,
                                  options.ray_bidirectional);
  return g;
}

inline void strip_ray_edges(PropagationGraph& g) { g.ray_edges.clear(); }

inline std::string edges_to_csv(const EdgeSet& es) {
  std::string out = "sender,receiver,dr,dtheta\n";
  for (std::size_t e = 0; e < es.size(); ++e)
    out += std::to_string(es.senders[e]) + "," + std::to_string(es.receivers[e]) + "," +
           format_double(es.attrs[e].dr) + "," + format_double(es.attrs[e].dtheta) + "\n";
  return out;
}

}  // namespace radiomap

#endif  // RADIOMAP_GRAPH_HPP
