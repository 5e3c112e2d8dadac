#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftdg/error.hpp"
#include "shiftdg/eventually_periodic.hpp"

namespace shiftdg {

using Vertex = std::size_t;
using Mask = std::uint64_t;

/// Adjacency is stored as one 64-bit row per vertex.
inline constexpr std::size_t kMaxVertices = 64;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

template <class F>
void for_each_bit(Mask m, F f) {
  while (m) {
    f(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
}

inline std::vector<Vertex> bits_of(Mask m) {
  std::vector<Vertex> out;
  for_each_bit(m, [&](std::size_t i) { out.push_back(i); });
  return out;
}

/// Finite digraph with string labels in declaration order. Loops allowed.
class Digraph {
 public:
  Digraph() = default;

  explicit Digraph(std::vector<std::string> labels) {
    for (auto& l : labels) add_vertex(std::move(l));
  }

  Digraph(std::vector<std::string> labels,
          const std::vector<std::pair<std::string, std::string>>& edges)
      : Digraph(std::move(labels)) {
    for (const auto& [u, v] : edges) add_edge(u, v);
  }

  Vertex add_vertex(std::string label) {
    if (labels_.size() >= kMaxVertices) fail(ErrorCode::Malformed, "more than 64 vertices");
    if (find(label)) fail(ErrorCode::Malformed, "duplicate vertex label '" + label + "'");
    labels_.push_back(std::move(label));
    out_.push_back(0);
    in_.push_back(0);
    return labels_.size() - 1;
  }

  void add_edge(Vertex u, Vertex v) {
    check(u);
    check(v);
    out_[u] |= bit(v);
    in_[v] |= bit(u);
  }

  void add_edge(const std::string& u, const std::string& v) { add_edge(at(u), at(v)); }

  void remove_edge(Vertex u, Vertex v) {
    check(u);
    check(v);
    out_[u] &= ~bit(v);
    in_[v] &= ~bit(u);
  }

  void clear_edges() {
    std::fill(out_.begin(), out_.end(), 0);
    std::fill(in_.begin(), in_.end(), 0);
  }

  std::size_t size() const { return labels_.size(); }
  Mask all() const { return size() == 64 ? ~Mask{0} : bit(size()) - 1; }

  bool has_edge(Vertex u, Vertex v) const { return (out_[u] >> v) & 1U; }
  Mask out_mask(Vertex u) const { return out_[u]; }
  Mask in_mask(Vertex v) const { return in_[v]; }
  std::vector<Vertex> successors(Vertex u) const { return bits_of(out_[u]); }
  std::vector<Vertex> predecessors(Vertex v) const { return bits_of(in_[v]); }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (Mask m : out_) n += static_cast<std::size_t>(std::popcount(m));
    return n;
  }

  /// Edges ordered by (source, target) index.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> es;
    for (Vertex u = 0; u < size(); ++u)
      for_each_bit(out_[u], [&](Vertex v) { es.emplace_back(u, v); });
    return es;
  }

  const std::string& label(Vertex v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Vertex> find(const std::string& label) const {
    for (Vertex v = 0; v < labels_.size(); ++v)
      if (labels_[v] == label) return v;
    return std::nullopt;
  }

  Vertex at(const std::string& label) const {
    if (auto v = find(label)) return *v;
    fail(ErrorCode::Malformed, "unknown vertex '" + label + "'");
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  void check(Vertex v) const {
    if (v >= size()) fail(ErrorCode::Malformed, "vertex index out of range");
  }

  std::vector<std::string> labels_;
  std::vector<Mask> out_;
  std::vector<Mask> in_;
};

/// Same labels and same labelled edges, ignoring declaration order.
inline bool same_labelled(const Digraph& g, const Digraph& h) {
  if (g.size() != h.size()) return false;
  std::vector<Vertex> to_h(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    auto w = h.find(g.label(v));
    if (!w) return false;
    to_h[v] = *w;
  }
  if (g.edge_count() != h.edge_count()) return false;
  for (auto [u, v] : g.edges())
    if (!h.has_edge(to_h[u], to_h[v])) return false;
  return true;
}

struct Walk {
  std::vector<Vertex> steps;
  std::size_t length() const { return steps.empty() ? 0 : steps.size() - 1; }
  friend bool operator==(const Walk&, const Walk&) = default;
};

using EpWalk = EventuallyPeriodic<Vertex>;

inline bool is_walk(const Digraph& g, const std::vector<Vertex>& steps) {
  if (steps.empty()) return false;
  for (Vertex v : steps)
    if (v >= g.size()) return false;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i)
    if (!g.has_edge(steps[i], steps[i + 1])) return false;
  return true;
}

inline bool is_walk(const Digraph& g, const Walk& w) { return is_walk(g, w.steps); }

/// Preamble, junction and wrap-around pairs are all edges.
inline bool is_walk(const Digraph& g, const EpWalk& w) {
  if (w.period.empty()) return false;
  std::vector<Vertex> seq = w.preamble;
  seq.insert(seq.end(), w.period.begin(), w.period.end());
  seq.push_back(w.period.front());
  return is_walk(g, seq);
}

inline void require_walk(const Digraph& g, const EpWalk& w) {
  if (!is_walk(g, w)) fail(ErrorCode::InvalidWalk, "sequence is not a walk in the digraph");
}

/// Every vertex reaches every vertex (itself included) by a walk of length >= 1.
inline bool is_strongly_connected(const Digraph& g) {
  const std::size_t n = g.size();
  if (n == 0) return false;
  if (n == 1) return g.has_edge(0, 0);
  auto closure = [&](bool forward) {
    Mask seen = bit(0), frontier = bit(0);
    while (frontier) {
      Mask next = 0;
      for_each_bit(frontier, [&](Vertex u) { next |= forward ? g.out_mask(u) : g.in_mask(u); });
      frontier = next & ~seen;
      seen |= next;
    }
    return seen;
  };
  return closure(true) == g.all() && closure(false) == g.all();
}

namespace detail {

struct Tarjan {
  const Digraph& g;
  std::vector<int> index, low;
  std::vector<bool> on_stack;
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> comps;
  int counter = 0;

  explicit Tarjan(const Digraph& graph)
      : g(graph), index(graph.size(), -1), low(graph.size(), 0), on_stack(graph.size(), false) {}

  void visit(Vertex v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for_each_bit(g.out_mask(v), [&](Vertex w) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    });
    if (low[v] == index[v]) {
      std::vector<Vertex> comp;
      Vertex w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  }
};

}  // namespace detail

/// SCC decomposition; components ordered by smallest member, members ascending.
inline std::vector<std::vector<Vertex>> strongly_connected_components(const Digraph& g) {
  detail::Tarjan t(g);
  for (Vertex v = 0; v < g.size(); ++v)
    if (t.index[v] < 0) t.visit(v);
  std::sort(t.comps.begin(), t.comps.end());
  return std::move(t.comps);
}

/// Shortest walk from u to v (length 0 when u == v).
inline std::optional<std::vector<Vertex>> shortest_path(const Digraph& g, Vertex u, Vertex v) {
  std::vector<Vertex> parent(g.size(), g.size());
  std::vector<Vertex> queue{u};
  parent[u] = u;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex x = queue[head];
    if (x == v) break;
    for_each_bit(g.out_mask(x), [&](Vertex y) {
      if (parent[y] == g.size()) {
        parent[y] = x;
        queue.push_back(y);
      }
    });
  }
  if (parent[v] == g.size()) return std::nullopt;
  std::vector<Vertex> path{v};
  while (path.back() != u) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

inline void require_strongly_connected(const Digraph& g) {
  if (!is_strongly_connected(g)) fail(ErrorCode::NotStronglyConnected);
}

/// Walk from v to w traversing every edge. Edges are taken one at a time,
/// always the uncovered edge whose source is nearest to the current vertex,
/// joined by shortest paths.
inline Walk covering_closed_walk(const Digraph& g, Vertex v, Vertex w) {
  require_strongly_connected(g);
  if (v >= g.size() || w >= g.size()) fail(ErrorCode::Malformed, "vertex index out of range");
  std::vector<Mask> uncovered(g.size());
  std::size_t remaining = 0;
  for (Vertex u = 0; u < g.size(); ++u) {
    uncovered[u] = g.out_mask(u);
    remaining += static_cast<std::size_t>(std::popcount(uncovered[u]));
  }
  Walk walk{{v}};
  auto append = [&](const std::vector<Vertex>& path) {
    walk.steps.insert(walk.steps.end(), path.begin() + 1, path.end());
  };
  while (remaining > 0) {
    // BFS layers from the current vertex; first layer holding an uncovered edge wins.
    Vertex cur = walk.steps.back();
    std::vector<Vertex> parent(g.size(), g.size());
    parent[cur] = cur;
    Mask layer = bit(cur), seen = bit(cur);
    Vertex source = g.size();
    while (layer && source == g.size()) {
      for_each_bit(layer, [&](Vertex x) {
        if (source == g.size() && uncovered[x]) source = x;
      });
      if (source != g.size()) break;
      Mask next = 0;
      for_each_bit(layer, [&](Vertex x) {
        for_each_bit(g.out_mask(x) & ~seen & ~next, [&](Vertex y) {
          parent[y] = x;
          next |= bit(y);
        });
      });
      seen |= next;
      layer = next;
    }
    if (source == g.size()) internal_bug("covering walk lost an edge");
    std::vector<Vertex> path{source};
    while (path.back() != cur) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    append(path);
    Vertex target = static_cast<Vertex>(std::countr_zero(uncovered[source]));
    uncovered[source] &= ~bit(target);
    --remaining;
    walk.steps.push_back(target);
  }
  append(*shortest_path(g, walk.steps.back(), w));
  return walk;
}

/// Walk of exactly `len` arrows ending at v, built by stepping back along in-edges.
inline Walk backward_extend(const Digraph& g, Vertex v, std::size_t len) {
  require_strongly_connected(g);
  if (v >= g.size()) fail(ErrorCode::Malformed, "vertex index out of range");
  std::vector<Vertex> rev{v};
  rev.reserve(len + 1);
  for (std::size_t i = 0; i < len; ++i)
    rev.push_back(static_cast<Vertex>(std::countr_zero(g.in_mask(rev.back()))));
  std::reverse(rev.begin(), rev.end());
  return Walk{std::move(rev)};
}

/// Periodic walk whose period is a covering closed walk at the first vertex
/// (the repeated endpoint dropped).
inline EpWalk diligent_schedule(const Digraph& g) {
  Walk closed = covering_closed_walk(g, 0, 0);
  closed.steps.pop_back();
  return EpWalk{{}, std::move(closed.steps)};
}

/// Edges traversed within one period cycle, wrap-around included.
inline std::vector<Mask> period_edges(const Digraph& g, const EpWalk& w) {
  std::vector<Mask> seen(g.size(), 0);
  const std::size_t p = w.period.size();
  for (std::size_t i = 0; i < p; ++i) seen[w.period[i]] |= bit(w.period[(i + 1) % p]);
  return seen;
}

inline bool is_diligent(const Digraph& g, const EpWalk& w) {
  require_walk(g, w);
  auto seen = period_edges(g, w);
  for (Vertex u = 0; u < g.size(); ++u)
    if (seen[u] != g.out_mask(u)) return false;
  return true;
}

/// No vertex without incident edges.
inline bool has_isolated_point(const Digraph& g) {
  for (Vertex v = 0; v < g.size(); ++v)
    if (g.out_mask(v) == 0 && g.in_mask(v) == 0) return true;
  return false;
}

}  // namespace shiftdg
