#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftdg/relation.hpp"
#include "shiftdg/state_space.hpp"

namespace shiftdg {

namespace detail {

/// One-step projecting relation from position k to k + 1.
inline Relation step_relation(const Digraph& B, const std::vector<Mask>& fibers, const EpWalk& abar,
                              std::size_t k) {
  Relation t(B.size());
  const Mask to = fibers[abar.at(k + 1)];
  for_each_bit(fibers[abar.at(k)], [&](Vertex x) { t.set_row(x, B.out_mask(x) & to); });
  return t;
}

inline std::string unique_label(const Digraph& g, std::string label) {
  while (g.find(label)) label += "'";
  return label;
}

}  // namespace detail

/// (v,w) is in R_{l,m} iff some walk from v at l to w at m projects onto abar there.
inline Relation walkability_relation(const DigraphMap& phi, const EpWalk& abar, std::size_t l,
                                     std::size_t m) {
  if (l >= m) fail(ErrorCode::InvalidRange, "need l < m");
  require_walk(phi.cod, abar);
  const auto fibers = phi.fibers();
  Relation r = Relation::diagonal(phi.dom.size(), fibers[abar.at(l)]);
  for (std::size_t k = l; k < m; ++k) r = r.then(detail::step_relation(phi.dom, fibers, abar, k));
  return r;
}

/// Smallest start whose state trajectory never empties. Starts are monotone
/// (a later start sees a superset of states), so one preamble plus one
/// period of candidates decides existence.
inline std::optional<std::size_t> first_surviving_start(const DigraphMap& phi, const EpWalk& abar) {
  const std::size_t stop = abar.preamble.size() + abar.period.size();
  for (std::size_t m = 0; m < stop; ++m)
    if (never_empty_from(phi, abar, m)) return m;
  return std::nullopt;
}

inline void require_lifting_inputs(const DigraphMap& phi, const EpWalk& abar) {
  require_epimorphism(phi);
  require_walk(phi.cod, abar);
  if (!is_diligent(phi.cod, abar)) fail(ErrorCode::NotDiligent);
  require_strongly_connected(phi.dom);
}

/// Homogeneous set D = {m0 + j * spacing} with R_{l,m} = R for all l < m in D.
struct Homogeneous {
  Relation R;
  std::size_t m0 = 0;
  std::size_t spacing = 0;
  std::size_t exponent = 0;  // spacing = exponent * |period|
  Vertex a_D = 0;

  std::size_t point(std::size_t j) const { return m0 + j * spacing; }
  bool in_D(std::size_t i) const { return i >= m0 && (i - m0) % spacing == 0; }
  std::size_t stabilization() const { return m0 + spacing; }
};

/// Past and future relations at every offset of one window [d_k, d_{k+1}].
struct WindowRelations {
  std::size_t start = 0;
  std::vector<Relation> past;
  std::vector<Relation> future;
};

inline WindowRelations window_relations(const DigraphMap& phi, const EpWalk& abar,
                                        const Homogeneous& H, std::size_t k) {
  const std::size_t n = phi.dom.size(), delta = H.spacing, d = H.point(k);
  const auto fibers = phi.fibers();
  std::vector<Relation> fwd(delta + 1), bwd(delta + 1);
  fwd[0] = Relation::diagonal(n, fibers[H.a_D]);
  for (std::size_t r = 1; r <= delta; ++r)
    fwd[r] = fwd[r - 1].then(detail::step_relation(phi.dom, fibers, abar, d + r - 1));
  bwd[delta] = Relation::diagonal(n, fibers[H.a_D]);
  for (std::size_t r = delta; r-- > 0;)
    bwd[r] = detail::step_relation(phi.dom, fibers, abar, d + r).then(bwd[r + 1]);
  WindowRelations w{d, std::vector<Relation>(delta + 1), std::vector<Relation>(delta + 1)};
  w.past[0] = w.future[0] = w.past[delta] = w.future[delta] = H.R;
  for (std::size_t r = 1; r < delta; ++r) {
    w.past[r] = k >= 1 ? fwd[r] | H.R.then(fwd[r]) : fwd[r];
    w.future[r] = bwd[r] | bwd[r].then(H.R);
  }
  return w;
}

inline std::pair<Relation, Relation> past_future_relations(const DigraphMap& phi,
                                                           const EpWalk& abar,
                                                           const Homogeneous& H, std::size_t i) {
  if (i < H.m0) fail(ErrorCode::InvalidRange, "position precedes D");
  const std::size_t k = (i - H.m0) / H.spacing, r = (i - H.m0) % H.spacing;
  if (r == 0) return {H.R, H.R};
  auto w = window_relations(phi, abar, H, k);
  return {w.past[r], w.future[r]};
}

/// The proof's Observations, each as a checkable statement.
struct ObservationReport {
  bool idempotent = false;
  bool nonempty = false;
  bool reflexive = false;
  bool constant_a_D = false;
  bool matches_walkability = false;
  bool past_future_nonempty = false;
  bool absorption = false;  // F then R within F, R then P within P
  bool periodic = false;    // windows 1 and 2 coincide

  bool all() const {
    return idempotent && nonempty && reflexive && constant_a_D && matches_walkability &&
           past_future_nonempty && absorption && periodic;
  }
};

inline ObservationReport check_observations(const DigraphMap& phi, const EpWalk& abar,
                                            const Homogeneous& H) {
  ObservationReport o;
  o.idempotent = H.R.then(H.R) == H.R;
  o.nonempty = !H.R.empty();
  o.reflexive = H.R.reflexive_point().has_value();
  o.constant_a_D = true;
  for (std::size_t j = 0; j < 4; ++j) o.constant_a_D = o.constant_a_D && abar.at(H.point(j)) == H.a_D;
  o.matches_walkability = walkability_relation(phi, abar, H.point(0), H.point(1)) == H.R &&
                          walkability_relation(phi, abar, H.point(0), H.point(2)) == H.R &&
                          walkability_relation(phi, abar, H.point(1), H.point(2)) == H.R;
  auto w1 = window_relations(phi, abar, H, 1);
  auto w2 = window_relations(phi, abar, H, 2);
  o.past_future_nonempty = o.absorption = o.periodic = true;
  for (const auto* w : {&w1, &w2})
    for (std::size_t r = 0; r <= H.spacing; ++r) {
      const Relation &P = w->past[r], &F = w->future[r];
      o.past_future_nonempty = o.past_future_nonempty && !P.empty() && !F.empty();
      o.absorption = o.absorption && F.then(H.R).subset_of(F) && H.R.then(P).subset_of(P);
    }
  o.periodic = w1.past == w2.past && w1.future == w2.future;
  return o;
}

inline Homogeneous homogeneous_relation(const DigraphMap& phi, const EpWalk& abar) {
  require_lifting_inputs(phi, abar);
  if (!first_surviving_start(phi, abar)) fail(ErrorCode::NoAlmostProjectingWalk);
  const std::size_t p = abar.period.size(), m0 = abar.preamble.size();
  const Relation M = walkability_relation(phi, abar, m0, m0 + p);
  // powers[i] = M^(i+1); find the first repeat M^(n+1) = M^(j+1)
  std::vector<Relation> powers{M};
  std::size_t index = 0, cycle = 0;
  for (;;) {
    Relation next = powers.back().then(M);
    auto it = std::find(powers.begin(), powers.end(), next);
    if (it != powers.end()) {
      const auto j = static_cast<std::size_t>(it - powers.begin());
      index = j + 1;
      cycle = powers.size() - j;
      break;
    }
    powers.push_back(std::move(next));
  }
  std::size_t e = ((index + cycle - 1) / cycle) * cycle;  // least multiple of cycle >= index
  Homogeneous H;
  H.R = powers[e - 1];
  if (e * p < 2) e *= 2;  // idempotent, so the power is unchanged
  H.m0 = m0;
  H.exponent = e;
  H.spacing = e * p;
  H.a_D = abar.at(m0);
  if (!check_observations(phi, abar, H).all()) internal_bug("homogeneous relation observations");
  return H;
}

/// Vertex v with (v,v) in R such that every edge lies on a D-to-D closed
/// projecting walk at v; decided on the first stabilized window.
inline std::optional<Vertex> dagger_check(const DigraphMap& phi, const EpWalk& abar,
                                          const Homogeneous& H) {
  const std::size_t delta = H.spacing, d1 = H.point(1);
  const auto fibers = phi.fibers();
  auto w = window_relations(phi, abar, H, 1);
  const Relation diag = Relation::diagonal(phi.dom.size(), fibers[H.a_D]);
  w.past[0] = diag | H.R;  // the closed walk may start right at this D point
  w.future[delta] = diag | H.R;
  const auto edges = phi.dom.edges();
  for (Vertex v = 0; v < phi.dom.size(); ++v) {
    if (!H.R.contains(v, v)) continue;
    bool all = true;
    for (auto [b, b2] : edges) {
      bool found = false;
      for (std::size_t r = 0; r < delta && !found; ++r)
        found = phi(b) == abar.at(d1 + r) && phi(b2) == abar.at(d1 + r + 1) &&
                w.past[r].contains(v, b) && w.future[r + 1].contains(b2, v);
      if (!found) {
        all = false;
        break;
      }
    }
    if (all) return v;
  }
  return std::nullopt;
}

struct Lift {
  EpWalk witness;
  std::size_t threshold = 0;
  bool diligent = false;
};

struct Obstruct {
  Digraph c;
  DigraphMap psi;
  EpWalk c_walk;
  std::size_t threshold = 0;
};

struct DichotomyAudit {
  std::string stage;  // "weak" or "diligent"
  std::optional<std::size_t> surviving_start;
  std::optional<Homogeneous> homogeneous;
  std::optional<Vertex> dagger_vertex;
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  std::size_t components = 0;
  std::string incompatibility_route;  // "exact" or "components"
};

struct DichotomyOutcome {
  std::variant<Lift, Obstruct> result;
  DichotomyAudit audit;

  bool is_lift() const { return std::holds_alternative<Lift>(result); }
  const Lift& lift() const { return std::get<Lift>(result); }
  const Obstruct& obstruct() const { return std::get<Obstruct>(result); }
};

/// Incompatibility of a constructed obstruction. The exhaustive search runs
/// when the pullback is within its cap; beyond it the component-closure
/// decision is used. Returns the route taken; finding a witness is a bug.
inline std::string confirm_incompatible(const DigraphMap& phi, const DigraphMap& psi,
                                        ExactSearchOptions opts = {}) {
  std::size_t size = 0;
  const auto f1 = phi.fibers(), f2 = psi.fibers();
  for (std::size_t a = 0; a < f1.size(); ++a)
    size += static_cast<std::size_t>(std::popcount(f1[a]) * std::popcount(f2[a]));
  if (size <= opts.max_vertices) {
    if (compatible_exact(phi, psi, opts)) internal_bug("obstruction is compatible");
    return "exact";
  }
  if (compatible_by_components(phi, psi)) internal_bug("obstruction is compatible");
  return "components";
}

namespace detail {

/// C = A plus the dying trajectory from a start in the periodic zone.
inline Obstruct weak_obstruction(const DigraphMap& phi, const EpWalk& abar) {
  const Digraph& A = phi.cod;
  const std::size_t p = abar.period.size(), m = abar.preamble.size() + 1;
  Lasso l = run_lasso(phi, abar, m);
  if (!l.dies) internal_bug("expected a dying trajectory");
  const std::size_t k = l.states.size() - 1;

  Obstruct o;
  o.c = A;
  std::vector<Vertex> state_vertex;
  std::vector<State> distinct;
  std::vector<Vertex> distinct_vertex;
  for (State s : l.states) {
    auto it = std::find(distinct.begin(), distinct.end(), s);
    if (it == distinct.end()) {
      distinct.push_back(s);
      distinct_vertex.push_back(o.c.add_vertex(unique_label(o.c, state_label(phi.dom, s))));
      state_vertex.push_back(distinct_vertex.back());
    } else {
      state_vertex.push_back(distinct_vertex[static_cast<std::size_t>(it - distinct.begin())]);
    }
  }
  for (std::size_t j = 0; j < k; ++j) o.c.add_edge(state_vertex[j], state_vertex[j + 1]);
  o.c.add_edge(abar.at(m - 1), state_vertex[0]);
  o.c.add_edge(state_vertex[k], abar.at(m + k + 1));

  o.psi = {o.c, A, {}};
  for (Vertex a = 0; a < A.size(); ++a) o.psi.assignment.push_back(a);
  for (State s : distinct)
    o.psi.assignment.push_back(s ? phi(static_cast<Vertex>(std::countr_zero(s))) : abar.at(m + k));

  // trajectory blocks every L positions, A-segments between them long enough
  // to traverse every edge of A
  const std::size_t L = p * ((k + 2 + p + p - 1) / p);
  for (std::size_t i = 0; i < m; ++i) o.c_walk.preamble.push_back(abar.at(i));
  for (std::size_t j = 0; j < L; ++j)
    o.c_walk.period.push_back(j <= k ? state_vertex[j] : abar.at(m + j));
  o.threshold = 0;
  return o;
}

/// Walk from v at D point `from` back to v at a later D point, traversing
/// edge (b, b2), as the list of vertices at consecutive positions.
inline std::vector<Vertex> anchored_circuit(const DigraphMap& phi, const EpWalk& abar,
                                            const Homogeneous& H, Vertex v, std::size_t from,
                                            Vertex b, Vertex b2) {
  const Digraph& B = phi.dom;
  const std::size_t n = B.size(), T = 4 * H.spacing;
  const auto fibers = phi.fibers();
  std::vector<std::array<Mask, 2>> reach(T + 1, {0, 0});
  std::vector<int> parent((T + 1) * n * 2, -1);
  auto slot = [&](std::size_t t, Vertex y, int f) { return (t * n + y) * 2 + static_cast<std::size_t>(f); };
  reach[0][0] = bit(v);
  for (std::size_t t = 0; t < T; ++t) {
    const Mask to = fibers[abar.at(from + t + 1)];
    for (int f = 0; f < 2; ++f)
      for_each_bit(reach[t][static_cast<std::size_t>(f)], [&](Vertex x) {
        for_each_bit(B.out_mask(x) & to, [&](Vertex y) {
          int nf = (f == 1 || (x == b && y == b2)) ? 1 : 0;
          auto& r = reach[t + 1][static_cast<std::size_t>(nf)];
          if (!(r & bit(y))) {
            r |= bit(y);
            parent[slot(t + 1, y, nf)] = static_cast<int>(x * 2 + static_cast<std::size_t>(f));
          }
        });
      });
    if ((t + 1) % H.spacing == 0 && (reach[t + 1][1] & bit(v))) {
      std::vector<Vertex> walk{v};
      int f = 1;
      for (std::size_t s = t + 1; s > 0; --s) {
        int code = parent[slot(s, walk.back(), f)];
        walk.push_back(static_cast<Vertex>(code / 2));
        f = code % 2;
      }
      std::reverse(walk.begin(), walk.end());
      return walk;
    }
  }
  internal_bug("no anchored circuit within four windows");
}

inline Lift diligent_lift(const DigraphMap& phi, const EpWalk& abar, const Homogeneous& H,
                          Vertex v) {
  const Digraph& B = phi.dom;
  Lift out;
  out.threshold = H.m0;
  out.diligent = true;
  Walk prefix = backward_extend(B, v, H.m0);
  out.witness.preamble.assign(prefix.steps.begin(), prefix.steps.end() - 1);
  std::vector<Mask> covered(B.size(), 0);
  std::size_t pos = H.m0;
  for (auto [b, b2] : B.edges()) {
    if (covered[b] & bit(b2)) continue;
    auto circuit = anchored_circuit(phi, abar, H, v, pos, b, b2);
    for (std::size_t i = 0; i + 1 < circuit.size(); ++i) covered[circuit[i]] |= bit(circuit[i + 1]);
    out.witness.period.insert(out.witness.period.end(), circuit.begin(), circuit.end() - 1);
    pos += circuit.size() - 1;
  }
  return out;
}

/// C = {T} plus the (P^i, F^i) pairs strictly inside a stabilized window.
inline Obstruct heart_obstruction(const DigraphMap& phi, const EpWalk& abar, const Homogeneous& H,
                                  std::size_t& components) {
  const std::size_t delta = H.spacing;
  auto w1 = window_relations(phi, abar, H, 1);
  auto w2 = window_relations(phi, abar, H, 2);
  if (w1.past != w2.past || w1.future != w2.future) internal_bug("windows differ");
  components = 1;

  Obstruct o;
  const Vertex T = o.c.add_vertex("T");
  std::vector<std::pair<Relation, Relation>> distinct;
  std::vector<Vertex> at(delta + 1, T);  // vertex at each window offset
  for (std::size_t r = 1; r < delta; ++r) {
    std::pair<Relation, Relation> key{w1.past[r], w1.future[r]};
    auto it = std::find(distinct.begin(), distinct.end(), key);
    if (it == distinct.end()) {
      distinct.push_back(std::move(key));
      at[r] = o.c.add_vertex("pf" + std::to_string(r));
    } else {
      at[r] = static_cast<Vertex>(it - distinct.begin()) + 1;
    }
  }
  for (std::size_t r = 0; r < delta; ++r) o.c.add_edge(at[r], at[r + 1]);

  o.psi = {o.c, phi.cod, std::vector<Vertex>(o.c.size(), phi.cod.size())};
  for (std::size_t r = 0; r < delta; ++r) {
    Vertex a = abar.at(H.point(1) + r);
    Vertex& slot = o.psi.assignment[at[r]];
    if (slot != phi.cod.size() && slot != a) internal_bug("pair vertex over two base vertices");
    slot = a;
  }

  o.c_walk.period.assign(at.begin(), at.end() - 1);
  Walk prefix = backward_extend(o.c, T, H.m0);
  o.c_walk.preamble.assign(prefix.steps.begin(), prefix.steps.end() - 1);
  o.threshold = H.m0;
  return o;
}

}  // namespace detail

/// Either a walk almost projecting onto abar, or an obstruction C with an
/// epimorphism psi incompatible with phi.
inline DichotomyOutcome weak_dichotomy(const DigraphMap& phi, const EpWalk& abar) {
  require_lifting_inputs(phi, abar);
  DichotomyOutcome out;
  out.audit.stage = "weak";
  if (auto m = first_surviving_start(phi, abar)) {
    out.audit.surviving_start = m;
    out.result = Lift{extract_projecting_walk(phi, abar, *m).normalized(), *m, false};
    return out;
  }
  Obstruct o = detail::weak_obstruction(phi, abar);
  out.audit.incompatibility_route = confirm_incompatible(phi, o.psi);
  out.audit.components = 1;
  out.result = std::move(o);
  return out;
}

/// As weak_dichotomy, but a Lift witness is diligent, and failure of the
/// diligent lift yields its own obstruction.
inline DichotomyOutcome diligent_dichotomy(const DigraphMap& phi, const EpWalk& abar) {
  DichotomyOutcome out = weak_dichotomy(phi, abar);
  if (!out.is_lift()) return out;
  out.audit.stage = "diligent";
  Homogeneous H = homogeneous_relation(phi, abar);
  out.audit.homogeneous = H;
  out.audit.window_lo = H.point(1);
  out.audit.window_hi = H.point(2);
  if (auto v = dagger_check(phi, abar, H)) {
    out.audit.dagger_vertex = v;
    Lift l = detail::diligent_lift(phi, abar, H, *v);
    l.witness = l.witness.normalized();
    out.result = std::move(l);
    return out;
  }
  Obstruct o = detail::heart_obstruction(phi, abar, H, out.audit.components);
  out.audit.incompatibility_route = confirm_incompatible(phi, o.psi);
  out.result = std::move(o);
  return out;
}

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> f;
    for (const auto& c : checks)
      if (!c.ok) f.push_back(c.name);
    return f;
  }
  void add(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

/// Independent validation of an outcome. For obstructions, strong
/// connectivity and epimorphy of psi are first derived from the diligent
/// almost-projecting C-walk, then confirmed directly.
inline VerifyReport verify_outcome(const DigraphMap& phi, const EpWalk& abar,
                                   const DichotomyOutcome& outcome, bool expect_diligent) {
  VerifyReport rep;
  rep.add("target_is_walk", is_walk(phi.cod, abar));
  if (!rep.ok()) return rep;
  if (outcome.is_lift()) {
    const Lift& l = outcome.lift();
    bool walk = is_walk(phi.dom, l.witness);
    rep.add("witness_is_walk", walk);
    if (!walk) return rep;
    rep.add("witness_almost_projects",
            agree_from(l.witness, abar, l.threshold, [&](Vertex b, Vertex a) { return phi(b) == a; }));
    if (expect_diligent || l.diligent) rep.add("witness_diligent", is_diligent(phi.dom, l.witness));
    return rep;
  }
  const Obstruct& o = outcome.obstruct();
  bool total = o.psi.dom == o.c && o.psi.cod == phi.cod && o.psi.assignment.size() == o.c.size() &&
               std::all_of(o.psi.assignment.begin(), o.psi.assignment.end(),
                           [&](Vertex a) { return a < phi.cod.size(); });
  rep.add("psi_total", total);
  rep.add("c_no_isolated_points", !has_isolated_point(o.c));
  bool walk = is_walk(o.c, o.c_walk);
  rep.add("c_walk_is_walk", walk);
  if (!walk || !total) return rep;
  const bool diligent = is_diligent(o.c, o.c_walk);
  rep.add("c_walk_diligent", diligent);
  const bool projects =
      agree_from(o.c_walk, abar, o.threshold, [&](Vertex c, Vertex a) { return o.psi(c) == a; });
  rep.add("c_walk_almost_projects", projects);

  // derived: the period is a closed walk through every vertex and edge of C,
  // and its image is a period of abar, which covers A
  Mask visited = 0;
  for (Vertex c : o.c_walk.period) visited |= bit(c);
  const bool derived_sc = diligent && !has_isolated_point(o.c) && visited == o.c.all();
  rep.add("derived_strongly_connected", derived_sc);
  rep.add("strongly_connected", is_strongly_connected(o.c));
  const bool abar_diligent = is_diligent(phi.cod, abar);
  rep.add("derived_epimorphism", diligent && projects && abar_diligent);
  rep.add("epimorphism", is_epimorphism(o.psi));
  if (is_epimorphism(o.psi) && is_epimorphism(phi)) {
    bool compatible;
    try {
      compatible = compatible_exact(phi, o.psi).has_value();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SearchTooLarge) throw;
      compatible = compatible_by_components(phi, o.psi).has_value();
    }
    rep.add("incompatible", !compatible);
  } else {
    rep.add("incompatible", false, "maps are not both epimorphisms");
  }
  return rep;
}

}  // namespace shiftdg
