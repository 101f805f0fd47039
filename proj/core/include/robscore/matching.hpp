#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace robscore {

/// Bipartite graph with `left` and `right` vertex sets 0..L-1 and 0..R-1.
struct BipartiteGraph {
  std::size_t num_left = 0;
  std::size_t num_right = 0;
  std::vector<std::vector<std::uint32_t>> adjacency;  // left vertex -> right neighbours

  explicit BipartiteGraph(std::size_t left = 0, std::size_t right = 0)
      : num_left(left), num_right(right), adjacency(left) {}

  void add_edge(std::size_t l, std::size_t r) { adjacency[l].push_back(static_cast<std::uint32_t>(r)); }
  std::size_t num_edges() const;
};

inline constexpr std::int64_t kUnmatched = -1;

struct Matching {
  std::vector<std::int64_t> left_to_right;  // kUnmatched if free
  std::vector<std::int64_t> right_to_left;
  std::size_t size = 0;
};

/// Maximum-cardinality matching by Hopcroft-Karp (BFS layering, then
/// vertex-disjoint shortest augmenting paths found by DFS).
Matching maximum_matching(const BipartiteGraph& g);

struct VertexCover {
  std::vector<bool> left;
  std::vector<bool> right;
  std::size_t size = 0;
};

/// Minimum vertex cover from a maximum matching (Konig): with Z the vertices
/// reachable from free left vertices by alternating paths, the cover is
/// (left \ Z) U (right & Z).
VertexCover minimum_vertex_cover(const BipartiteGraph& g, const Matching& m);
VertexCover minimum_vertex_cover(const BipartiteGraph& g);

bool covers_all_edges(const BipartiteGraph& g, const VertexCover& cover);

}  // namespace robscore
