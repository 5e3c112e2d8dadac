#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftdg/lifting.hpp"

namespace shiftdg {

/// Eventually periodic coloring of the natural numbers; block v is the set of
/// positions colored v. Every label must occur in the period.
struct OmegaPartitionSpec {
  std::vector<std::string> labels;
  EventuallyPeriodic<std::size_t> coloring;

  friend bool operator==(const OmegaPartitionSpec&, const OmegaPartitionSpec&) = default;
};

inline void require_spec(const OmegaPartitionSpec& spec) {
  if (spec.coloring.period.empty()) fail(ErrorCode::Malformed, "empty period");
  for (std::size_t i = 0; i < spec.labels.size(); ++i)
    for (std::size_t j = i + 1; j < spec.labels.size(); ++j)
      if (spec.labels[i] == spec.labels[j]) fail(ErrorCode::Malformed, "duplicate block label");
  std::vector<bool> in_period(spec.labels.size(), false);
  for (std::size_t c : spec.coloring.period) {
    if (c >= spec.labels.size()) fail(ErrorCode::Malformed, "color out of range");
    in_period[c] = true;
  }
  for (std::size_t c : spec.coloring.preamble)
    if (c >= spec.labels.size()) fail(ErrorCode::Malformed, "color out of range");
  for (std::size_t c = 0; c < spec.labels.size(); ++c)
    if (!in_period[c]) fail(ErrorCode::Malformed, "block '" + spec.labels[c] + "' is finite");
}

/// The partition associated with a walk: block v = positions where the walk is at v.
inline OmegaPartitionSpec spec_from_walk(const Digraph& g, const EpWalk& w) {
  OmegaPartitionSpec spec{g.labels(), w};
  require_spec(spec);
  return spec;
}

inline OmegaPartitionSpec realize_digraph(const Digraph& g) {
  return spec_from_walk(g, diligent_schedule(g));
}

/// u -> v iff u is immediately followed by v infinitely often.
inline Digraph shift_hitting_digraph(const OmegaPartitionSpec& spec) {
  require_spec(spec);
  Digraph g(spec.labels);
  const auto& per = spec.coloring.period;
  for (std::size_t i = 0; i < per.size(); ++i) g.add_edge(per[i], per[(i + 1) % per.size()]);
  return g;
}

inline bool is_isomorphism(const Digraph& g, const Digraph& h, const std::vector<Vertex>& iso) {
  if (g.size() != h.size() || iso.size() != g.size()) return false;
  Mask hit = 0;
  for (Vertex v : iso) {
    if (v >= h.size() || (hit & bit(v))) return false;
    hit |= bit(v);
  }
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = 0; v < g.size(); ++v)
      if (g.has_edge(u, v) != h.has_edge(iso[u], iso[v])) return false;
  return true;
}

/// Lexicographically least isomorphism g -> h, by backtracking over bijections.
inline std::optional<std::vector<Vertex>> find_isomorphism(const Digraph& g, const Digraph& h) {
  if (g.size() != h.size() || g.edge_count() != h.edge_count()) return std::nullopt;
  if (g.size() > 12) fail(ErrorCode::BudgetExceeded, "isomorphism search is limited to 12 vertices");
  const std::size_t n = g.size();
  std::vector<Vertex> iso(n);
  Mask used = 0;
  auto degrees = [](const Digraph& d, Vertex v) {
    return std::pair{std::popcount(d.out_mask(v)), std::popcount(d.in_mask(v))};
  };
  auto extend = [&](auto& self, std::size_t u) -> bool {
    if (u == n) return true;
    for (Vertex v = 0; v < n; ++v) {
      if ((used & bit(v)) || degrees(g, u) != degrees(h, v)) continue;
      bool ok = g.has_edge(u, u) == h.has_edge(v, v);
      for (std::size_t w = 0; w < u && ok; ++w)
        ok = g.has_edge(u, w) == h.has_edge(v, iso[w]) && g.has_edge(w, u) == h.has_edge(iso[w], v);
      if (!ok) continue;
      iso[u] = v;
      used |= bit(v);
      if (self(self, u + 1)) return true;
      used &= ~bit(v);
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;
  return iso;
}

/// Diligent walk in target following spec's period under iso (target vertex ->
/// spec label); the preamble is kept where it is a walk into the period and
/// replaced by a backward extension elsewhere.
inline EpWalk walk_from_spec(const OmegaPartitionSpec& spec, const Digraph& target,
                             const std::vector<Vertex>& iso) {
  const Digraph h = shift_hitting_digraph(spec);
  if (!is_isomorphism(target, h, iso)) fail(ErrorCode::NotIsomorphism);
  std::vector<Vertex> inv(iso.size());
  for (Vertex v = 0; v < iso.size(); ++v) inv[iso[v]] = v;
  EpWalk w;
  for (std::size_t c : spec.coloring.period) w.period.push_back(inv[c]);
  std::vector<Vertex> pre;
  for (std::size_t c : spec.coloring.preamble) pre.push_back(inv[c]);
  // longest suffix of the preamble that walks into the period
  std::size_t keep_from = pre.size();
  Vertex next = w.period.front();
  while (keep_from > 0 && target.has_edge(pre[keep_from - 1], next)) next = pre[--keep_from];
  Walk fill = backward_extend(target, next, keep_from);
  w.preamble.assign(fill.steps.begin(), fill.steps.end() - 1);
  w.preamble.insert(w.preamble.end(), pre.begin() + static_cast<long>(keep_from), pre.end());
  return w;
}

/// Natural map between the shift hitting digraphs when every fine block is
/// eventually inside a coarse block.
inline std::optional<DigraphMap> spec_refines(const OmegaPartitionSpec& fine,
                                              const OmegaPartitionSpec& coarse) {
  require_spec(fine);
  require_spec(coarse);
  auto [start, len] = common_window(fine.coloring, coarse.coloring);
  const std::size_t none = coarse.labels.size();
  std::vector<std::size_t> target(fine.labels.size(), none);
  for (std::size_t n = start; n < start + len; ++n) {
    std::size_t f = fine.coloring.at(n), c = coarse.coloring.at(n);
    if (target[f] == none) target[f] = c;
    else if (target[f] != c) return std::nullopt;
  }
  DigraphMap m{shift_hitting_digraph(fine), shift_hitting_digraph(coarse), std::move(target)};
  if (!is_epimorphism(m)) internal_bug("natural map of specs is not an epimorphism");
  return m;
}

/// A strongly connected digraph V with an epimorphism onto the base digraph.
struct VirtualRefinement {
  DigraphMap phi;  // V -> base
  const Digraph& base() const { return phi.cod; }
  const Digraph& digraph() const { return phi.dom; }
};

struct Realized {
  OmegaPartitionSpec fine;
  std::vector<Vertex> iso;  // V -> shift_hitting_digraph(fine)
  DigraphMap pi;            // natural map fine -> coarse
};

struct Incompatible {
  DigraphMap psi;  // C -> base
  Digraph c;
  OmegaPartitionSpec fine;
  std::vector<Vertex> iso;  // C -> shift_hitting_digraph(fine)
  DigraphMap pi;
};

struct Polarization {
  std::variant<Realized, Incompatible> result;
  DichotomyOutcome outcome;

  bool realized() const { return std::holds_alternative<Realized>(result); }
};

/// Labels of the composite pi after iso, compared with the labels of f.
inline bool triangle_commutes(const DigraphMap& f, const std::vector<Vertex>& iso,
                              const DigraphMap& pi) {
  for (Vertex v = 0; v < f.dom.size(); ++v)
    if (pi.cod.label(pi(iso[v])) != f.cod.label(f(v))) return false;
  return true;
}

inline Polarization polarize_virtual_refinement(const OmegaPartitionSpec& spec,
                                                const VirtualRefinement& vr) {
  const Digraph h = shift_hitting_digraph(spec);
  if (!same_labelled(h, vr.base())) fail(ErrorCode::BaseMismatch);
  require_strongly_connected(vr.digraph());
  require_epimorphism(vr.phi);
  EpWalk abar;
  for (std::size_t c : spec.coloring.preamble) abar.preamble.push_back(vr.base().at(spec.labels[c]));
  for (std::size_t c : spec.coloring.period) abar.period.push_back(vr.base().at(spec.labels[c]));
  if (!is_walk(vr.base(), abar) || !is_diligent(vr.base(), abar)) fail(ErrorCode::NotDiligent);

  Polarization out{Realized{}, diligent_dichotomy(vr.phi, abar)};
  auto finish = [&](const Digraph& g, const EpWalk& walk, const DigraphMap& f, auto& slot) {
    slot.fine = spec_from_walk(g, walk);
    slot.iso.resize(g.size());
    for (Vertex v = 0; v < g.size(); ++v) slot.iso[v] = v;
    if (!is_isomorphism(g, shift_hitting_digraph(slot.fine), slot.iso))
      internal_bug("fine spec does not recover its digraph");
    auto pi = spec_refines(slot.fine, spec);
    if (!pi) internal_bug("fine spec does not refine the coarse spec");
    slot.pi = *pi;
    if (!triangle_commutes(f, slot.iso, slot.pi)) internal_bug("natural map disagrees with the epimorphism");
  };
  if (out.outcome.is_lift()) {
    Realized r;
    finish(vr.digraph(), out.outcome.lift().witness, vr.phi, r);
    out.result = std::move(r);
  } else {
    const Obstruct& o = out.outcome.obstruct();
    Incompatible inc{o.psi, o.c, {}, {}, {}};
    finish(o.c, o.c_walk, o.psi, inc);
    out.result = std::move(inc);
  }
  return out;
}

}  // namespace shiftdg
