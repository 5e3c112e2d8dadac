#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shiftdg/morphism.hpp"

namespace shiftdg {

/// A state is a subset of one fiber, as a mask over domain vertices.
using State = Mask;

inline std::string state_label(const Digraph& dom, State s) {
  std::string out = "{";
  bool first = true;
  for_each_bit(s, [&](Vertex v) {
    if (!first) out += ",";
    out += dom.label(v);
    first = false;
  });
  return out + "}";
}

struct StateEdge {
  State from;
  State to;
  std::vector<std::pair<Vertex, Vertex>> induced_by;  // codomain edges
};

struct StateSpace {
  DigraphMap base;
  std::vector<State> states;  // empty state first, then per codomain vertex
  std::vector<StateEdge> edges;

  std::size_t index_of(State s) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == s) return i;
    internal_bug("unknown state");
  }

  /// Whole subset-construction digraph, the empty state included.
  Digraph digraph() const {
    Digraph g;
    for (State s : states) g.add_vertex(state_label(base.dom, s));
    for (const auto& e : edges) g.add_edge(index_of(e.from), index_of(e.to));
    return g;
  }

  /// The projection from nonempty states onto the codomain.
  DigraphMap natural_map() const {
    Digraph g;
    std::vector<State> nonempty;
    for (State s : states)
      if (s) {
        nonempty.push_back(s);
        g.add_vertex(state_label(base.dom, s));
      }
    auto pos = [&](State s) {
      return static_cast<Vertex>(std::find(nonempty.begin(), nonempty.end(), s) - nonempty.begin());
    };
    for (const auto& e : edges)
      if (e.from && e.to) g.add_edge(pos(e.from), pos(e.to));
    DigraphMap m{g, base.cod, {}};
    for (State s : nonempty) m.assignment.push_back(base(static_cast<Vertex>(std::countr_zero(s))));
    return m;
  }
};

/// Cached fibers and adjacency for repeated stepping.
class Stepper {
 public:
  explicit Stepper(const DigraphMap& phi) : phi_(phi), fibers_(phi.fibers()) {}

  Mask fiber(Vertex a) const { return fibers_[a]; }

  State step(State s, Vertex a1) const {
    Mask reach = 0;
    for_each_bit(s, [&](Vertex x) { reach |= phi_.dom.out_mask(x); });
    return reach & fibers_[a1];
  }

 private:
  const DigraphMap& phi_;
  std::vector<Mask> fibers_;
};

inline StateSpace build_state_space(const DigraphMap& phi) {
  require_epimorphism(phi);
  if (phi.dom.size() > 30) fail(ErrorCode::SearchTooLarge, "state space too large");
  StateSpace ss{phi, {0}, {}};
  Stepper st(phi);
  for (Vertex a = 0; a < phi.cod.size(); ++a) {
    Mask f = st.fiber(a);
    // nonempty submasks of the fiber in increasing order
    for (Mask s = (~f + 1) & f; s; s = (s - f) & f) ss.states.push_back(s);
  }
  std::map<std::pair<State, State>, std::size_t> where;
  auto add = [&](State from, State to, std::pair<Vertex, Vertex> by) {
    auto [it, fresh] = where.try_emplace({from, to}, ss.edges.size());
    if (fresh) ss.edges.push_back({from, to, {}});
    ss.edges[it->second].induced_by.push_back(by);
  };
  for (auto [a0, a1] : phi.cod.edges()) {
    add(0, 0, {a0, a1});
    Mask f = st.fiber(a0);
    for (Mask s = (~f + 1) & f; s; s = (s - f) & f) add(s, st.step(s, a1), {a0, a1});
  }
  return ss;
}

inline std::size_t state_count_formula(const DigraphMap& phi) {
  std::size_t n = 1;
  for (Mask f : phi.fibers()) n += (std::size_t{1} << std::popcount(f)) - 1;
  return n;
}

inline State step_state(const DigraphMap& phi, State s, std::pair<Vertex, Vertex> a_edge) {
  auto [a0, a1] = a_edge;
  if (a0 >= phi.cod.size() || a1 >= phi.cod.size() || !phi.cod.has_edge(a0, a1))
    fail(ErrorCode::InvalidWalk, "not a codomain edge");
  Stepper st(phi);
  if (s & ~st.fiber(a0)) fail(ErrorCode::StateFiberMismatch);
  return st.step(s, a1);
}

/// S_0 .. S_horizon starting from the full fiber over abar(start).
inline std::vector<State> state_trajectory(const DigraphMap& phi, const EpWalk& abar,
                                           std::size_t start, std::size_t horizon) {
  require_walk(phi.cod, abar);
  Stepper st(phi);
  std::vector<State> traj{st.fiber(abar.at(start))};
  for (std::size_t k = 0; k < horizon; ++k)
    traj.push_back(st.step(traj.back(), abar.at(start + k + 1)));
  return traj;
}

/// Pigeonhole bound on the steps needed before a (residue, state) pair repeats.
inline std::size_t horizon_bound(const DigraphMap& phi, const EpWalk& abar) {
  return abar.preamble.size() + abar.period.size() * (state_count_formula(phi) + 1);
}

namespace detail {

/// Trajectory until it dies or a (residue, state) pair repeats.
struct Lasso {
  std::vector<State> states;  // S_0 .. S_t
  bool dies = false;          // S_t is empty
  std::size_t loop_start = 0; // S_t repeats S_loop_start (when !dies)
};

inline Lasso run_lasso(const DigraphMap& phi, const EpWalk& abar, std::size_t start) {
  require_walk(phi.cod, abar);
  Stepper st(phi);
  const std::size_t pre = abar.preamble.size(), p = abar.period.size();
  const std::size_t bound = horizon_bound(phi, abar);
  Lasso l;
  std::map<std::pair<std::size_t, State>, std::size_t> seen;
  State s = st.fiber(abar.at(start));
  for (std::size_t k = 0;; ++k) {
    l.states.push_back(s);
    if (s == 0) {
      l.dies = true;
      return l;
    }
    std::size_t pos = start + k;
    if (pos >= pre) {
      auto [it, fresh] = seen.try_emplace({(pos - pre) % p, s}, k);
      if (!fresh) {
        l.loop_start = it->second;
        return l;
      }
    }
    if (k > bound) internal_bug("trajectory exceeded pigeonhole horizon");
    s = st.step(s, abar.at(pos + 1));
  }
}

}  // namespace detail

inline bool never_empty_from(const DigraphMap& phi, const EpWalk& abar, std::size_t start) {
  return !detail::run_lasso(phi, abar, start).dies;
}

/// Infinite walk in dom(phi) projecting onto abar from `start` on, with an
/// arbitrary valid prefix before it.
inline EpWalk extract_projecting_walk(const DigraphMap& phi, const EpWalk& abar,
                                      std::size_t start) {
  detail::Lasso l = detail::run_lasso(phi, abar, start);
  if (l.dies) fail(ErrorCode::NoProjectingWalk);
  const Digraph& B = phi.dom;
  const std::size_t t = l.states.size() - 1, s = l.loop_start, cyc = t - s;
  auto next_index = [&](std::size_t k) { return k + 1 < t ? k + 1 : s; };
  auto has_succ_in = [&](Vertex x, Mask target) { return (B.out_mask(x) & target) != 0; };

  // good[k]: members of S_k with an infinite projecting continuation
  std::vector<Mask> good(l.states.begin(), l.states.end() - 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = s; k < t; ++k) {
      Mask keep = 0;
      for_each_bit(good[k], [&](Vertex x) {
        if (has_succ_in(x, good[next_index(k)])) keep |= bit(x);
      });
      if (keep != good[k]) {
        good[k] = keep;
        changed = true;
      }
    }
  }
  for (std::size_t k = s; k-- > 0;) {
    Mask keep = 0;
    for_each_bit(good[k], [&](Vertex x) {
      if (has_succ_in(x, good[k + 1])) keep |= bit(x);
    });
    good[k] = keep;
  }
  if (good[0] == 0) internal_bug("nonempty trajectory without infinite branch");

  std::vector<Vertex> tail;
  std::map<std::pair<std::size_t, Vertex>, std::size_t> visited;
  std::size_t k = 0;
  Vertex b = static_cast<Vertex>(std::countr_zero(good[0]));
  for (;;) {
    if (k >= s) {
      auto [it, fresh] = visited.try_emplace({k, b}, tail.size());
      if (!fresh) {
        std::size_t q = it->second;
        EpWalk w;
        Walk prefix = start > 0 ? backward_extend(B, tail.front(), start) : Walk{{tail.front()}};
        w.preamble.assign(prefix.steps.begin(), prefix.steps.end() - 1);
        w.preamble.insert(w.preamble.end(), tail.begin(), tail.begin() + static_cast<long>(q));
        w.period.assign(tail.begin() + static_cast<long>(q), tail.end());
        return w;
      }
    }
    tail.push_back(b);
    std::size_t nk = next_index(k);
    b = static_cast<Vertex>(std::countr_zero(B.out_mask(b) & good[nk]));
    k = nk;
    if (tail.size() > t + cyc * B.size() + 1) internal_bug("projecting walk failed to cycle");
  }
}

}  // namespace shiftdg
