#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace usng {

// Vertices are labelled 1..N; smaller labels are older vertices in the
// dynamic models.
using VertexId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

inline constexpr std::uint32_t kNoCutoff = std::numeric_limits<std::uint32_t>::max();

/// Immutable undirected multigraph in compressed adjacency form.
///
/// Every edge {u,v} appears in both neighbor lists. A self-loop (v,v) is stored
/// twice in v's list, so it adds two to the degree of v. Parallel edges are
/// kept. Neighbor lists are sorted ascending.
class CompactGraph {
 public:
  CompactGraph() = default;

  /// Throws ParameterError if an endpoint is outside 1..n.
  static CompactGraph build(std::uint64_t n, std::span<const Edge> edges);

  std::uint64_t num_vertices() const { return n_; }
  std::uint64_t num_edges() const { return m_; }

  std::uint64_t degree(VertexId v) const { return offsets_[v] - offsets_[v - 1]; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v - 1], adjacency_.data() + offsets_[v]};
  }

  // offsets()[v-1]..offsets()[v] delimit the neighbors of v; size N+1.
  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const VertexId> adjacency() const { return adjacency_; }

  /// Canonical edge list: each undirected edge once as (u,v) with u <= v,
  /// ordered by u then v. Stable across runs for identical graphs.
  std::vector<Edge> edges() const;

  bool contains(VertexId v) const { return v >= 1 && v <= n_; }

 private:
  std::uint64_t n_ = 0;
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<VertexId> adjacency_;
};

/// Breadth-first distance queries with reusable scratch space.
///
/// Queries run a level-synchronous bidirectional search, always expanding the
/// side whose frontier has the smaller degree sum. Parallel edges and
/// self-loops never shorten a distance. One instance per thread; the graph
/// itself may be shared.
class DistanceQuery {
 public:
  explicit DistanceQuery(const CompactGraph& g);

  /// Minimum number of edges on a v-w path, or nullopt if it exceeds cutoff
  /// or no path exists.
  std::optional<std::uint32_t> distance(VertexId v, VertexId w,
                                        std::uint32_t cutoff = kNoCutoff);

 private:
  const CompactGraph* g_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> seen_[2];
  std::vector<std::uint32_t> depth_[2];
  std::vector<VertexId> frontier_[2];
  std::vector<VertexId> next_;
};

std::optional<std::uint32_t> bfs_distance(const CompactGraph& g, VertexId v, VertexId w,
                                          std::uint32_t cutoff = kNoCutoff);

/// Single-source distances, index v-1; unreachable vertices get -1.
std::vector<std::int64_t> bfs_all(const CompactGraph& g, VertexId source);

struct ComponentLabeling {
  std::vector<std::uint32_t> label;   // label[v-1]
  std::vector<std::uint64_t> sizes;   // sizes[component id]
  std::uint32_t giant_id = 0;

  std::uint64_t giant_size() const { return sizes.empty() ? 0 : sizes[giant_id]; }
  bool in_giant(VertexId v) const { return label[v - 1] == giant_id; }
};

/// Component ids are assigned in order of each component's smallest vertex,
/// so the component of vertex 1 is id 0. Ties for the giant go to the
/// smallest id.
ComponentLabeling components(const CompactGraph& g);

/// Vertices of the giant component in ascending order.
std::vector<VertexId> giant_vertices(const CompactGraph& g, const ComponentLabeling& labels);

}  // namespace usng
