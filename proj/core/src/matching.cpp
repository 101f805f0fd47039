#include "robscore/matching.hpp"

#include <limits>
#include <queue>

namespace robscore {

std::size_t BipartiteGraph::num_edges() const {
  std::size_t e = 0;
  for (const auto& adj : adjacency) e += adj.size();
  return e;
}

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& g)
      : g_(g), dist_(g.num_left), next_edge_(g.num_left) {
    m_.left_to_right.assign(g.num_left, kUnmatched);
    m_.right_to_left.assign(g.num_right, kUnmatched);
  }

  Matching run() {
    while (layer()) {
      std::fill(next_edge_.begin(), next_edge_.end(), 0);
      for (std::size_t l = 0; l < g_.num_left; ++l) {
        if (m_.left_to_right[l] == kUnmatched && augment(l)) ++m_.size;
      }
    }
    return std::move(m_);
  }

 private:
  // BFS from all free left vertices; true if some free right vertex is reachable.
  bool layer() {
    std::queue<std::size_t> q;
    for (std::size_t l = 0; l < g_.num_left; ++l) {
      if (m_.left_to_right[l] == kUnmatched) {
        dist_[l] = 0;
        q.push(l);
      } else {
        dist_[l] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const std::size_t l = q.front();
      q.pop();
      for (auto r : g_.adjacency[l]) {
        const auto mate = m_.right_to_left[r];
        if (mate == kUnmatched) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(mate)] == kInf) {
          dist_[static_cast<std::size_t>(mate)] = dist_[l] + 1;
          q.push(static_cast<std::size_t>(mate));
        }
      }
    }
    return found;
  }

  // Iterative DFS along the layered graph.
  bool augment(std::size_t root) {
    std::vector<std::size_t> path{root};
    while (!path.empty()) {
      const std::size_t l = path.back();
      const auto& adj = g_.adjacency[l];
      bool advanced = false;
      while (next_edge_[l] < adj.size()) {
        const std::uint32_t r = adj[next_edge_[l]];
        const auto mate = m_.right_to_left[r];
        if (mate == kUnmatched) {
          // Flip the path: every left vertex on it takes the right vertex its
          // cursor points at.
          for (auto it = path.rbegin(); it != path.rend(); ++it) {
            const std::size_t pl = *it;
            const std::uint32_t pr = g_.adjacency[pl][next_edge_[pl]];
            m_.left_to_right[pl] = pr;
            m_.right_to_left[pr] = static_cast<std::int64_t>(pl);
          }
          return true;
        }
        const auto ml = static_cast<std::size_t>(mate);
        if (dist_[ml] == dist_[l] + 1) {
          path.push_back(ml);
          advanced = true;
          break;
        }
        ++next_edge_[l];
      }
      if (advanced) continue;
      dist_[l] = kInf;  // dead end for this phase
      path.pop_back();
      if (!path.empty()) ++next_edge_[path.back()];
    }
    return false;
  }

  const BipartiteGraph& g_;
  Matching m_;
  std::vector<std::size_t> dist_;
  std::vector<std::size_t> next_edge_;
};

}  // namespace

Matching maximum_matching(const BipartiteGraph& g) { return HopcroftKarp(g).run(); }

VertexCover minimum_vertex_cover(const BipartiteGraph& g, const Matching& m) {
  std::vector<bool> z_left(g.num_left, false), z_right(g.num_right, false);
  std::vector<std::size_t> stack;
  for (std::size_t l = 0; l < g.num_left; ++l) {
    if (m.left_to_right[l] == kUnmatched) {
      z_left[l] = true;
      stack.push_back(l);
    }
  }
  // Left -> right along non-matching edges, right -> left along matching ones.
  while (!stack.empty()) {
    const std::size_t l = stack.back();
    stack.pop_back();
    for (auto r : g.adjacency[l]) {
      if (z_right[r] || m.left_to_right[l] == static_cast<std::int64_t>(r)) continue;
      z_right[r] = true;
      const auto mate = m.right_to_left[r];
      if (mate != kUnmatched && !z_left[static_cast<std::size_t>(mate)]) {
        z_left[static_cast<std::size_t>(mate)] = true;
        stack.push_back(static_cast<std::size_t>(mate));
      }
    }
  }
  VertexCover cover;
  cover.left.resize(g.num_left);
  cover.right.resize(g.num_right);
  for (std::size_t l = 0; l < g.num_left; ++l) {
    cover.left[l] = !z_left[l];
    cover.size += cover.left[l];
  }
  for (std::size_t r = 0; r < g.num_right; ++r) {
    cover.right[r] = z_right[r];
    cover.size += cover.right[r];
  }
  return cover;
}

VertexCover minimum_vertex_cover(const BipartiteGraph& g) {
  return minimum_vertex_cover(g, maximum_matching(g));
}

bool covers_all_edges(const BipartiteGraph& g, const VertexCover& cover) {
  for (std::size_t l = 0; l < g.num_left; ++l) {
    for (auto r : g.adjacency[l]) {
      if (!cover.left[l] && !cover.right[r]) return false;
    }
  }
  return true;
}

}  // namespace robscore
