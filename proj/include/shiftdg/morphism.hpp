#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shiftdg/digraph.hpp"

namespace shiftdg {

/// Vertex function dom -> cod. Surjectivity and edge behaviour are checked
/// properties, not invariants.
struct DigraphMap {
  Digraph dom;
  Digraph cod;
  std::vector<Vertex> assignment;

  Vertex operator()(Vertex v) const { return assignment[v]; }

  /// Fiber of each codomain vertex as a mask over domain vertices.
  std::vector<Mask> fibers() const {
    std::vector<Mask> f(cod.size(), 0);
    for (Vertex v = 0; v < dom.size(); ++v) f[assignment[v]] |= bit(v);
    return f;
  }

  friend bool operator==(const DigraphMap&, const DigraphMap&) = default;
};

inline void require_total(const DigraphMap& m) {
  if (m.assignment.size() != m.dom.size()) fail(ErrorCode::Malformed, "map is not total");
  for (Vertex v : m.assignment)
    if (v >= m.cod.size()) fail(ErrorCode::Malformed, "map image outside codomain");
}

inline DigraphMap identity_map(const Digraph& g) {
  DigraphMap m{g, g, {}};
  for (Vertex v = 0; v < g.size(); ++v) m.assignment.push_back(v);
  return m;
}

/// Reason the map fails to be an epimorphism, or nullopt if it is one.
inline std::optional<std::string> epimorphism_defect(const DigraphMap& m) {
  require_total(m);
  Mask hit = 0;
  for (Vertex v : m.assignment) hit |= bit(v);
  if (hit != m.cod.all()) return "not surjective";
  std::vector<Mask> image(m.cod.size(), 0);
  for (auto [u, v] : m.dom.edges()) {
    Vertex a = m(u), b = m(v);
    if (!m.cod.has_edge(a, b))
      return "edge (" + m.dom.label(u) + "," + m.dom.label(v) + ") maps to a non-edge";
    image[a] |= bit(b);
  }
  for (auto [a, b] : m.cod.edges())
    if (!(image[a] & bit(b)))
      return "edge (" + m.cod.label(a) + "," + m.cod.label(b) + ") has no preimage";
  return std::nullopt;
}

inline bool is_epimorphism(const DigraphMap& m) { return !epimorphism_defect(m); }

inline void require_epimorphism(const DigraphMap& m) {
  if (auto why = epimorphism_defect(m)) fail(ErrorCode::NotEpimorphism, *why);
}

/// f after g.
inline DigraphMap compose(const DigraphMap& f, const DigraphMap& g) {
  if (!(g.cod == f.dom)) fail(ErrorCode::DomainMismatch, "cod(g) differs from dom(f)");
  require_total(f);
  require_total(g);
  DigraphMap h{g.dom, f.cod, {}};
  for (Vertex v : g.assignment) h.assignment.push_back(f(v));
  return h;
}

inline Digraph induced_subgraph(const Digraph& g, const std::vector<Vertex>& subset) {
  Digraph h;
  for (Vertex v : subset) h.add_vertex(g.label(v));
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = 0; j < subset.size(); ++j)
      if (g.has_edge(subset[i], subset[j])) h.add_edge(i, j);
  return h;
}

/// Restriction of m to the induced sub-digraph on subset.
inline DigraphMap restrict_map(const DigraphMap& m, const std::vector<Vertex>& subset) {
  DigraphMap r{induced_subgraph(m.dom, subset), m.cod, {}};
  for (Vertex v : subset) r.assignment.push_back(m(v));
  return r;
}

struct Pullback {
  Digraph digraph;
  DigraphMap proj1;
  DigraphMap proj2;
};

inline std::string pair_label(const std::string& u, const std::string& v) {
  return "(" + u + "," + v + ")";
}

inline Pullback pullback(const DigraphMap& phi, const DigraphMap& psi) {
  if (!(phi.cod == psi.cod)) fail(ErrorCode::CodomainMismatch);
  require_total(phi);
  require_total(psi);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < phi.dom.size(); ++u)
    for (Vertex v = 0; v < psi.dom.size(); ++v)
      if (phi(u) == psi(v)) pairs.emplace_back(u, v);
  if (pairs.size() > kMaxVertices) fail(ErrorCode::SearchTooLarge, "pullback exceeds 64 vertices");
  Pullback pb;
  for (auto [u, v] : pairs) pb.digraph.add_vertex(pair_label(phi.dom.label(u), psi.dom.label(v)));
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = 0; j < pairs.size(); ++j)
      if (phi.dom.has_edge(pairs[i].first, pairs[j].first) &&
          psi.dom.has_edge(pairs[i].second, pairs[j].second))
        pb.digraph.add_edge(i, j);
  pb.proj1 = {pb.digraph, phi.dom, {}};
  pb.proj2 = {pb.digraph, psi.dom, {}};
  for (auto [u, v] : pairs) {
    pb.proj1.assignment.push_back(u);
    pb.proj2.assignment.push_back(v);
  }
  return pb;
}

inline void require_compat_inputs(const DigraphMap& phi, const DigraphMap& psi) {
  if (!(phi.cod == psi.cod)) fail(ErrorCode::CodomainMismatch);
  require_epimorphism(phi);
  require_epimorphism(psi);
}

inline bool compatible_fast(const DigraphMap& phi, const DigraphMap& psi) {
  require_compat_inputs(phi, psi);
  return is_strongly_connected(pullback(phi, psi).digraph);
}

struct CompatibilityWitness {
  std::vector<Vertex> subset;  // pullback vertex indices
  Digraph digraph;             // induced sub-digraph
  DigraphMap proj1;
  DigraphMap proj2;
};

struct ExactSearchOptions {
  std::size_t max_vertices = 20;
};

namespace detail {

/// Bitmask view of a pullback for subset tests.
struct SubsetTester {
  const Pullback& pb;
  std::size_t n;
  std::vector<Mask> fiber1, fiber2;  // pullback vertices over each factor vertex
  std::vector<std::pair<Vertex, Vertex>> edges1, edges2;

  explicit SubsetTester(const Pullback& p)
      : pb(p),
        n(p.digraph.size()),
        fiber1(p.proj1.cod.size(), 0),
        fiber2(p.proj2.cod.size(), 0),
        edges1(p.proj1.cod.edges()),
        edges2(p.proj2.cod.edges()) {
    for (Vertex x = 0; x < n; ++x) {
      fiber1[p.proj1(x)] |= bit(x);
      fiber2[p.proj2(x)] |= bit(x);
    }
  }

  bool covers_vertices(Mask s) const {
    for (Mask f : fiber1)
      if (!(f & s)) return false;
    for (Mask f : fiber2)
      if (!(f & s)) return false;
    return true;
  }

  bool strongly_connected(Mask s) const {
    const Digraph& g = pb.digraph;
    Vertex root = static_cast<Vertex>(std::countr_zero(s));
    if (std::popcount(s) == 1) return g.has_edge(root, root);
    for (bool forward : {true, false}) {
      Mask seen = bit(root), frontier = bit(root);
      while (frontier) {
        Mask next = 0;
        for_each_bit(frontier, [&](Vertex u) { next |= (forward ? g.out_mask(u) : g.in_mask(u)); });
        next &= s;
        frontier = next & ~seen;
        seen |= next;
      }
      if (seen != s) return false;
    }
    return true;
  }

  bool covers_edges(Mask s, const std::vector<Mask>& fiber,
                    const std::vector<std::pair<Vertex, Vertex>>& edges) const {
    for (auto [a, b] : edges) {
      bool found = false;
      for_each_bit(fiber[a] & s, [&](Vertex x) {
        if (!found && (pb.digraph.out_mask(x) & fiber[b] & s)) found = true;
      });
      if (!found) return false;
    }
    return true;
  }

  bool works(Mask s) const {
    return covers_vertices(s) && strongly_connected(s) && covers_edges(s, fiber1, edges1) &&
           covers_edges(s, fiber2, edges2);
  }

  CompatibilityWitness witness(Mask s) const {
    CompatibilityWitness w;
    w.subset = bits_of(s);
    w.proj1 = restrict_map(pb.proj1, w.subset);
    w.proj2 = restrict_map(pb.proj2, w.subset);
    w.digraph = w.proj1.dom;
    return w;
  }
};

}  // namespace detail

/// Exhaustive search for a strongly connected induced sub-digraph of the
/// pullback with both projections epimorphic. Only subsets of a single SCC
/// can be strongly connected, so the search runs per component, largest
/// subsets first.
inline std::optional<CompatibilityWitness> compatible_exact(const DigraphMap& phi,
                                                            const DigraphMap& psi,
                                                            ExactSearchOptions opts = {}) {
  require_compat_inputs(phi, psi);
  Pullback pb = pullback(phi, psi);
  if (pb.digraph.size() > opts.max_vertices)
    fail(ErrorCode::SearchTooLarge, "pullback has " + std::to_string(pb.digraph.size()) +
                                        " vertices, cap is " + std::to_string(opts.max_vertices));
  detail::SubsetTester tester(pb);
  for (const auto& comp : strongly_connected_components(pb.digraph)) {
    Mask c = 0;
    for (Vertex v : comp) c |= bit(v);
    if (!tester.covers_vertices(c)) continue;
    for (Mask s = c; s; s = (s - 1) & c)
      if (tester.works(s)) return tester.witness(s);
  }
  return std::nullopt;
}

/// Polynomial decision via the fact that a working subset can be enlarged to
/// its whole strongly connected component: induced edges only grow and the
/// component is strongly connected. Used where the pullback is beyond the
/// exhaustive cap.
inline std::optional<CompatibilityWitness> compatible_by_components(const DigraphMap& phi,
                                                                    const DigraphMap& psi) {
  require_compat_inputs(phi, psi);
  Pullback pb = pullback(phi, psi);
  detail::SubsetTester tester(pb);
  for (const auto& comp : strongly_connected_components(pb.digraph)) {
    Mask c = 0;
    for (Vertex v : comp) c |= bit(v);
    if (tester.works(c)) return tester.witness(c);
  }
  return std::nullopt;
}

/// left after top1 equals right after top2, pointwise.
inline bool commutes(const DigraphMap& top1, const DigraphMap& top2, const DigraphMap& left,
                     const DigraphMap& right) {
  if (!(top1.dom == top2.dom) || !(top1.cod == left.dom) || !(top2.cod == right.dom) ||
      !(left.cod == right.cod))
    fail(ErrorCode::DomainMismatch, "maps do not form a square");
  require_total(top1);
  require_total(top2);
  require_total(left);
  require_total(right);
  for (Vertex w = 0; w < top1.dom.size(); ++w)
    if (left(top1(w)) != right(top2(w))) return false;
  return true;
}

/// Full validation of a witness against the maps it claims to reconcile.
inline bool validate_witness(const DigraphMap& phi, const DigraphMap& psi,
                             const CompatibilityWitness& w) {
  return is_strongly_connected(w.digraph) && w.proj1.dom == w.digraph &&
         w.proj2.dom == w.digraph && w.proj1.cod == phi.dom && w.proj2.cod == psi.dom &&
         is_epimorphism(w.proj1) && is_epimorphism(w.proj2) && commutes(w.proj1, w.proj2, phi, psi);
}

}  // namespace shiftdg
