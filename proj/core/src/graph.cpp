#include "odcal/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "odcal/error.hpp"

namespace odcal {

SocialNetwork::SocialNetwork(std::size_t n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.a == e.b) throw InvalidParameter("self-loop on node " + std::to_string(e.a));
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.b >= n) throw InvalidParameter("edge endpoint " + std::to_string(e.b) + " out of range");
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InvalidParameter("duplicate edge");

  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges) {
    adjacency_[fill[e.a]++] = e.b;
    adjacency_[fill[e.b]++] = e.a;
  }
  for (std::size_t v = 0; v < n; ++v)
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
  edges_ = std::move(edges);
}

bool SocialNetwork::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= size() || v >= size()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

double SocialNetwork::mean_degree() const noexcept {
  return size() == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(size());
}

std::size_t SocialNetwork::max_degree() const noexcept {
  std::size_t best = 0;
  for (std::size_t v = 0; v < size(); ++v) best = std::max(best, degree(static_cast<NodeId>(v)));
  return best;
}

bool SocialNetwork::connected() const {
  const std::size_t n = size();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

SocialNetwork generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || n <= m)
    throw InvalidParameter("generate_ba requires n > m >= 1 (n=" + std::to_string(n) +
                           ", m=" + std::to_string(m) + ")");
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m * (m + 1) / 2 + m * (n - m - 1));
  // Each node appears once per incident edge endpoint.
  std::vector<NodeId> urn;
  urn.reserve(2 * edges.capacity());

  for (NodeId i = 0; i <= m; ++i) {
    for (NodeId j = i + 1; j <= m; ++j) {
      edges.push_back({i, j});
      urn.push_back(i);
      urn.push_back(j);
    }
  }

  std::vector<NodeId> targets;
  targets.reserve(m);
  for (std::size_t v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      NodeId t = urn[rng.below(urn.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    const auto node = static_cast<NodeId>(v);
    for (NodeId t : targets) {
      edges.push_back({t, node});
      urn.push_back(t);
      urn.push_back(node);
    }
  }
  return SocialNetwork(n, std::move(edges));
}

std::pair<NodeId, NodeId> random_edge(const SocialNetwork& network, Rng& rng) {
  if (network.edge_count() == 0) throw InvalidState("random_edge on a network without edges");
  const Edge& e = network.edges()[rng.below(network.edge_count())];
  return rng.coin() ? std::pair{e.b, e.a} : std::pair{e.a, e.b};
}

void write_edge_list(const SocialNetwork& network, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& e : network.edges()) out << e.a << ' ' << e.b << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SocialNetwork read_edge_list(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list " + path.string());
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  std::size_t max_node = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long a = -1, b = -1;
    std::string rest;
    if (!(fields >> a >> b) || (fields >> rest) || a < 0 || b < 0)
      throw ParseError("malformed edge line '" + line + "'", lineno);
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
    max_node = std::max<std::size_t>(max_node, static_cast<std::size_t>(std::max(a, b)));
  }
  if (n == 0) n = edges.empty() ? 0 : max_node + 1;
  try {
    return SocialNetwork(n, std::move(edges));
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("invalid edge list: ") + e.what());
  }
}

}  // namespace odcal
