#include "usng/graph.hpp"

#include <algorithm>
#include <string>

#include "usng/errors.hpp"

namespace usng {

CompactGraph CompactGraph::build(std::uint64_t n, std::span<const Edge> edges) {
  if (n > std::numeric_limits<VertexId>::max()) {
    throw ParameterError("vertex count exceeds 32-bit vertex ids");
  }
  CompactGraph g;
  g.n_ = n;
  g.m_ = edges.size();
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw ParameterError("edge endpoint out of range 1.." + std::to_string(n) + ": (" +
                           std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    ++g.offsets_[e.u];
    ++g.offsets_[e.v];
  }
  for (std::uint64_t i = 1; i <= n; ++i) g.offsets_[i] += g.offsets_[i - 1];

  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.adjacency_[cursor[e.u - 1]++] = e.v;
    g.adjacency_[cursor[e.v - 1]++] = e.u;
  }
  for (std::uint64_t v = 0; v < n; ++v) {
    std::sort(g.adjacency_.begin() + g.offsets_[v], g.adjacency_.begin() + g.offsets_[v + 1]);
  }
  return g;
}

std::vector<Edge> CompactGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (VertexId v = 1; v <= n_; ++v) {
    std::uint64_t loops = 0;
    for (VertexId w : neighbors(v)) {
      if (w > v) {
        out.push_back({v, w});
      } else if (w == v) {
        // Each self-loop occupies two consecutive slots.
        if (++loops % 2 == 0) out.push_back({v, v});
      }
    }
  }
  return out;
}

DistanceQuery::DistanceQuery(const CompactGraph& g) : g_(&g) {
  for (int s = 0; s < 2; ++s) {
    seen_[s].assign(g.num_vertices() + 1, 0);
    depth_[s].assign(g.num_vertices() + 1, 0);
  }
}

std::optional<std::uint32_t> DistanceQuery::distance(VertexId v, VertexId w,
                                                     std::uint32_t cutoff) {
  if (!g_->contains(v) || !g_->contains(w)) {
    throw ParameterError("distance query vertex out of range");
  }
  if (v == w) return 0u;
  if (cutoff == 0) return std::nullopt;

  if (++epoch_ == 0) {
    for (auto& s : seen_) std::fill(s.begin(), s.end(), 0u);
    epoch_ = 1;
  }
  const std::uint32_t ep = epoch_;

  seen_[0][v] = ep;
  depth_[0][v] = 0;
  seen_[1][w] = ep;
  depth_[1][w] = 0;
  frontier_[0].assign(1, v);
  frontier_[1].assign(1, w);
  std::uint32_t level[2] = {0, 0};
  std::uint64_t cost[2] = {g_->degree(v), g_->degree(w)};

  while (level[0] + level[1] < cutoff && !frontier_[0].empty() && !frontier_[1].empty()) {
    const int s = cost[0] <= cost[1] ? 0 : 1;
    const int o = 1 - s;
    next_.clear();
    std::uint64_t next_cost = 0;
    const std::uint32_t d = level[s] + 1;
    for (VertexId u : frontier_[s]) {
      for (VertexId x : g_->neighbors(u)) {
        if (seen_[o][x] == ep) return d + depth_[o][x];
        if (seen_[s][x] != ep) {
          seen_[s][x] = ep;
          depth_[s][x] = d;
          next_.push_back(x);
          next_cost += g_->degree(x);
        }
      }
    }
    frontier_[s].swap(next_);
    level[s] = d;
    cost[s] = next_cost;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> bfs_distance(const CompactGraph& g, VertexId v, VertexId w,
                                          std::uint32_t cutoff) {
  DistanceQuery q(g);
  return q.distance(v, w, cutoff);
}

std::vector<std::int64_t> bfs_all(const CompactGraph& g, VertexId source) {
  if (!g.contains(source)) throw ParameterError("bfs source out of range");
  std::vector<std::int64_t> dist(g.num_vertices(), -1);
  std::vector<VertexId> queue;
  queue.reserve(g.num_vertices());
  dist[source - 1] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (VertexId x : g.neighbors(u)) {
      if (dist[x - 1] < 0) {
        dist[x - 1] = dist[u - 1] + 1;
        queue.push_back(x);
      }
    }
  }
  return dist;
}

ComponentLabeling components(const CompactGraph& g) {
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  ComponentLabeling out;
  out.label.assign(g.num_vertices(), kUnset);
  std::vector<VertexId> stack;
  for (VertexId root = 1; root <= g.num_vertices(); ++root) {
    if (out.label[root - 1] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(out.sizes.size());
    std::uint64_t size = 0;
    out.label[root - 1] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      ++size;
      for (VertexId x : g.neighbors(u)) {
        if (out.label[x - 1] == kUnset) {
          out.label[x - 1] = id;
          stack.push_back(x);
        }
      }
    }
    out.sizes.push_back(size);
    if (size > out.sizes[out.giant_id]) out.giant_id = id;
  }
  return out;
}

std::vector<VertexId> giant_vertices(const CompactGraph& g, const ComponentLabeling& labels) {
  std::vector<VertexId> out;
  out.reserve(labels.giant_size());
  for (VertexId v = 1; v <= g.num_vertices(); ++v) {
    if (labels.in_giant(v)) out.push_back(v);
  }
  return out;
}

}  // namespace usng
