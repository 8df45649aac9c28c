#include "gridcorr/planarity.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "gridcorr/error.hpp"

namespace gridcorr {

std::vector<std::vector<EdgePair>> biconnected_blocks(int n, std::span<const EdgePair> edges) {
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    adj[static_cast<std::size_t>(a)].emplace_back(b, static_cast<int>(e));
    adj[static_cast<std::size_t>(b)].emplace_back(a, static_cast<int>(e));
  }
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<int> edge_stack;
  std::vector<std::vector<EdgePair>> blocks;
  struct Frame {
    int v;
    int parent_edge;
    std::size_t next;
  };
  int timer = 0;
  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<std::size_t>(root)] != -1) continue;
    disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = timer++;
    std::vector<Frame> frames{{root, -1, 0}};
    while (!frames.empty()) {
      Frame& f = frames.back();
      auto& nbrs = adj[static_cast<std::size_t>(f.v)];
      if (f.next < nbrs.size()) {
        auto [w, eid] = nbrs[f.next++];
        if (eid == f.parent_edge) continue;
        auto uw = static_cast<std::size_t>(w);
        auto uv = static_cast<std::size_t>(f.v);
        if (disc[uw] == -1) {
          edge_stack.push_back(eid);
          disc[uw] = low[uw] = timer++;
          frames.push_back({w, eid, 0});
        } else if (disc[uw] < disc[uv]) {
          edge_stack.push_back(eid);
          low[uv] = std::min(low[uv], disc[uw]);
        }
        continue;
      }
      Frame done = f;
      frames.pop_back();
      if (frames.empty()) break;
      auto u = static_cast<std::size_t>(frames.back().v);
      auto v = static_cast<std::size_t>(done.v);
      low[u] = std::min(low[u], low[v]);
      if (low[v] >= disc[u]) {
        std::vector<EdgePair> block;
        while (true) {
          int eid = edge_stack.back();
          edge_stack.pop_back();
          block.push_back(edges[static_cast<std::size_t>(eid)]);
          if (eid == done.parent_edge) break;
        }
        blocks.push_back(std::move(block));
      }
    }
  }
  return blocks;
}

namespace {

// Path-addition embedding of one biconnected block.
bool block_is_planar(const std::vector<EdgePair>& block) {
  std::unordered_map<int, int> relabel;
  for (auto [a, b] : block) {
    relabel.try_emplace(a, static_cast<int>(relabel.size()));
    relabel.try_emplace(b, static_cast<int>(relabel.size()));
  }
  const int nv = static_cast<int>(relabel.size());
  const int ne = static_cast<int>(block.size());
  if (ne <= 8 || nv <= 4) return true;
  if (ne > 3 * nv - 6) return false;

  std::vector<EdgePair> edges;
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(nv));
  for (auto [a, b] : block) {
    int x = relabel[a], y = relabel[b];
    adj[static_cast<std::size_t>(x)].emplace_back(y, static_cast<int>(edges.size()));
    adj[static_cast<std::size_t>(y)].emplace_back(x, static_cast<int>(edges.size()));
    edges.emplace_back(x, y);
  }

  std::vector<char> v_in(static_cast<std::size_t>(nv), 0), e_in(static_cast<std::size_t>(ne), 0);
  int embedded_edges = 0;
  // Faces as cyclic vertex lists; every face of a biconnected plane graph is a simple cycle.
  std::vector<std::vector<int>> faces;

  // Initial cycle: edge 0 closed by a shortest path avoiding it.
  {
    auto [a, b] = edges[0];
    std::vector<int> prev(static_cast<std::size_t>(nv), -1), prev_edge(static_cast<std::size_t>(nv), -1);
    std::deque<int> queue{b};
    prev[static_cast<std::size_t>(b)] = b;
    while (!queue.empty() && prev[static_cast<std::size_t>(a)] == -1) {
      int x = queue.front();
      queue.pop_front();
      for (auto [y, eid] : adj[static_cast<std::size_t>(x)]) {
        if (eid == 0 || prev[static_cast<std::size_t>(y)] != -1) continue;
        prev[static_cast<std::size_t>(y)] = x;
        prev_edge[static_cast<std::size_t>(y)] = eid;
        queue.push_back(y);
      }
    }
    if (prev[static_cast<std::size_t>(a)] == -1) fail(Errc::invalid_argument, "block is not biconnected");
    std::vector<int> cycle;
    for (int x = a; x != b; x = prev[static_cast<std::size_t>(x)]) {
      cycle.push_back(x);
      e_in[static_cast<std::size_t>(prev_edge[static_cast<std::size_t>(x)])] = 1;
    }
    cycle.push_back(b);
    e_in[0] = 1;
    for (int x : cycle) v_in[static_cast<std::size_t>(x)] = 1;
    embedded_edges = static_cast<int>(cycle.size());
    faces = {cycle, cycle};
  }

  std::vector<int> comp(static_cast<std::size_t>(nv));
  while (embedded_edges < ne) {
    // Faces incident to each embedded vertex, sorted by face index.
    std::vector<std::vector<int>> vertex_faces(static_cast<std::size_t>(nv));
    for (std::size_t f = 0; f < faces.size(); ++f)
      for (int x : faces[f]) vertex_faces[static_cast<std::size_t>(x)].push_back(static_cast<int>(f));

    struct Fragment {
      std::vector<int> attach;
      int edge = -1;       // single-edge fragment
      int component = -1;  // component of non-embedded vertices
    };
    std::vector<Fragment> fragments;
    for (int eid = 0; eid < ne; ++eid) {
      auto [a, b] = edges[static_cast<std::size_t>(eid)];
      if (!e_in[static_cast<std::size_t>(eid)] && v_in[static_cast<std::size_t>(a)] && v_in[static_cast<std::size_t>(b)])
        fragments.push_back({{a, b}, eid, -1});
    }
    std::fill(comp.begin(), comp.end(), -1);
    int n_comp = 0;
    for (int s = 0; s < nv; ++s) {
      if (v_in[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] != -1) continue;
      Fragment frag;
      frag.component = n_comp;
      std::deque<int> queue{s};
      comp[static_cast<std::size_t>(s)] = n_comp;
      while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (auto [y, eid] : adj[static_cast<std::size_t>(x)]) {
          if (v_in[static_cast<std::size_t>(y)]) {
            frag.attach.push_back(y);
          } else if (comp[static_cast<std::size_t>(y)] == -1) {
            comp[static_cast<std::size_t>(y)] = n_comp;
            queue.push_back(y);
          }
        }
      }
      std::sort(frag.attach.begin(), frag.attach.end());
      frag.attach.erase(std::unique(frag.attach.begin(), frag.attach.end()), frag.attach.end());
      fragments.push_back(std::move(frag));
      ++n_comp;
    }

    int chosen = -1, chosen_face = -1;
    bool forced = false;
    for (std::size_t k = 0; k < fragments.size(); ++k) {
      const auto& attach = fragments[k].attach;
      std::vector<int> admissible = vertex_faces[static_cast<std::size_t>(attach[0])];
      for (std::size_t i = 1; i < attach.size() && !admissible.empty(); ++i) {
        const auto& other = vertex_faces[static_cast<std::size_t>(attach[i])];
        std::vector<int> both;
        std::set_intersection(admissible.begin(), admissible.end(), other.begin(), other.end(),
                              std::back_inserter(both));
        admissible = std::move(both);
      }
      if (admissible.empty()) return false;
      if (chosen == -1 || (!forced && admissible.size() == 1)) {
        chosen = static_cast<int>(k);
        chosen_face = admissible.front();
        forced = admissible.size() == 1;
      }
    }

    // Path through the chosen fragment between two distinct attachments.
    const Fragment& frag = fragments[static_cast<std::size_t>(chosen)];
    std::vector<int> path;
    std::vector<int> path_edges;
    if (frag.edge >= 0) {
      path = {edges[static_cast<std::size_t>(frag.edge)].first, edges[static_cast<std::size_t>(frag.edge)].second};
      path_edges = {frag.edge};
    } else {
      int a1 = frag.attach[0];
      int start = -1, start_edge = -1;
      for (auto [y, eid] : adj[static_cast<std::size_t>(a1)])
        if (!v_in[static_cast<std::size_t>(y)] && comp[static_cast<std::size_t>(y)] == frag.component) {
          start = y;
          start_edge = eid;
          break;
        }
      std::vector<int> prev(static_cast<std::size_t>(nv), -1), prev_edge(static_cast<std::size_t>(nv), -1);
      std::deque<int> queue{start};
      prev[static_cast<std::size_t>(start)] = start;
      int end = -1, a2 = -1, end_edge = -1;
      while (!queue.empty() && end == -1) {
        int x = queue.front();
        queue.pop_front();
        for (auto [y, eid] : adj[static_cast<std::size_t>(x)]) {
          if (v_in[static_cast<std::size_t>(y)]) {
            if (y != a1) {
              end = x;
              a2 = y;
              end_edge = eid;
              break;
            }
          } else if (prev[static_cast<std::size_t>(y)] == -1) {
            prev[static_cast<std::size_t>(y)] = x;
            prev_edge[static_cast<std::size_t>(y)] = eid;
            queue.push_back(y);
          }
        }
      }
      if (end == -1) fail(Errc::invalid_argument, "fragment with a single attachment in a biconnected block");
      std::vector<int> inner, inner_edges;
      for (int x = end; x != start; x = prev[static_cast<std::size_t>(x)]) {
        inner.push_back(x);
        inner_edges.push_back(prev_edge[static_cast<std::size_t>(x)]);
      }
      inner.push_back(start);
      std::reverse(inner.begin(), inner.end());
      std::reverse(inner_edges.begin(), inner_edges.end());
      path.push_back(a1);
      path.insert(path.end(), inner.begin(), inner.end());
      path.push_back(a2);
      path_edges.push_back(start_edge);
      path_edges.insert(path_edges.end(), inner_edges.begin(), inner_edges.end());
      path_edges.push_back(end_edge);
    }

    // Split the face along the path.
    std::vector<int> face = faces[static_cast<std::size_t>(chosen_face)];
    const int from = path.front(), to = path.back();
    auto pos_from = static_cast<std::size_t>(std::find(face.begin(), face.end(), from) - face.begin());
    auto pos_to = static_cast<std::size_t>(std::find(face.begin(), face.end(), to) - face.begin());
    const std::size_t fl = face.size();
    std::vector<int> first, second;
    for (std::size_t k = pos_from;; k = (k + 1) % fl) {
      first.push_back(face[k]);
      if (k == pos_to) break;
    }
    for (std::size_t k = path.size() - 2; k >= 1; --k) first.push_back(path[k]);
    for (std::size_t k = pos_to;; k = (k + 1) % fl) {
      second.push_back(face[k]);
      if (k == pos_from) break;
    }
    for (std::size_t k = 1; k + 1 < path.size(); ++k) second.push_back(path[k]);
    faces[static_cast<std::size_t>(chosen_face)] = std::move(first);
    faces.push_back(std::move(second));

    for (int x : path) v_in[static_cast<std::size_t>(x)] = 1;
    for (int eid : path_edges) {
      if (!e_in[static_cast<std::size_t>(eid)]) {
        e_in[static_cast<std::size_t>(eid)] = 1;
        ++embedded_edges;
      }
    }
  }
  return true;
}

}  // namespace

bool is_planar(int n, std::span<const EdgePair> edges) {
  require(n >= 0, "vertex count must be >= 0");
  const auto ne = static_cast<long long>(edges.size());
  if (n <= 4 || ne <= 8) return true;
  if (ne > 3LL * n - 6) return false;
  for (const auto& block : biconnected_blocks(n, edges))
    if (!block_is_planar(block)) return false;
  return true;
}

IncrementalPlanarGraph::IncrementalPlanarGraph(int n) : n_(n), parent_(static_cast<std::size_t>(n)) {
  require(n >= 0, "vertex count must be >= 0");
  std::iota(parent_.begin(), parent_.end(), 0);
}

int IncrementalPlanarGraph::find(int v) {
  while (parent_[static_cast<std::size_t>(v)] != v) {
    parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
    v = parent_[static_cast<std::size_t>(v)];
  }
  return v;
}

bool IncrementalPlanarGraph::try_add_edge(int u, int v) {
  require(u >= 0 && v >= 0 && u < n_ && v < n_ && u != v, "invalid edge");
  if (u > v) std::swap(u, v);
  if (std::find(edges_.begin(), edges_.end(), EdgePair{u, v}) != edges_.end()) return false;
  int ru = find(u), rv = find(v);
  if (ru != rv) {
    // Joining two components by a bridge never breaks planarity.
    parent_[static_cast<std::size_t>(ru)] = rv;
    edges_.emplace_back(u, v);
    return true;
  }
  edges_.emplace_back(u, v);
  auto blocks = biconnected_blocks(n_, edges_);
  for (const auto& block : blocks) {
    if (std::find(block.begin(), block.end(), EdgePair{u, v}) == block.end()) continue;
    if (!block_is_planar(block)) {
      edges_.pop_back();
      return false;
    }
    break;
  }
  return true;
}

}  // namespace gridcorr
