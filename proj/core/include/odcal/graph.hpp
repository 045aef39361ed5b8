#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "odcal/rng.hpp"

namespace odcal {

using NodeId = std::uint32_t;

struct Edge {
  NodeId a;  // a < b
  NodeId b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph. Neighbor lists are sorted; the edge
/// list holds each edge once with a < b, in ascending order.
class SocialNetwork {
 public:
  SocialNetwork() = default;

  /// Builds from an arbitrary edge list. Throws InvalidParameter on
  /// self-loops, duplicates or endpoints >= n.
  SocialNetwork(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const noexcept;

  double mean_degree() const noexcept;
  std::size_t max_degree() const noexcept;
  bool connected() const;

 private:
  std::vector<std::size_t> offsets_;  // CSR row offsets, size n+1
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
};

/// Barabasi-Albert preferential attachment. The core is a complete graph on
/// m+1 nodes; every later node attaches m edges to distinct existing nodes
/// chosen with probability proportional to degree (endpoint urn, duplicates
/// rejected). Requires n > m >= 1.
SocialNetwork generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Uniform edge with a fair-coin orientation. Throws InvalidState when the
/// network has no edges.
std::pair<NodeId, NodeId> random_edge(const SocialNetwork& network, Rng& rng);

/// Edge-list text: one "i j" line per edge, 0-indexed, i < j, ascending.
void write_edge_list(const SocialNetwork& network, const std::filesystem::path& path);

/// Reads the edge-list format. Node count is max index + 1 unless `n` is
/// given (isolated trailing nodes cannot be inferred from the file).
SocialNetwork read_edge_list(const std::filesystem::path& path, std::size_t n = 0);

}  // namespace odcal
