#pragma once

// Brute-force references and enumerators. Nothing here calls the fast path it
// is used to validate: reachability, projecting walks, last-vertex sets and
// incompressibility are recomputed from raw adjacency.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "shiftdg/dynsys.hpp"
#include "shiftdg/io.hpp"
#include "shiftdg/realization.hpp"

namespace shiftdg::oracle {

struct EnumerationBudget {
  std::size_t max_vertices = 4;  // domains
  std::size_t max_codomain = 3;
  std::size_t max_period = 6;
  std::size_t max_atoms = 6;
  std::uint64_t sample_seed = 20261015;
  std::size_t samples = 10000;
  bool mutant = false;  // test hook: corrupts one fast path inside crosscheck_suite

  void validate() const {
    if (max_vertices < 1 || max_codomain < 1 || max_period < 1 || max_atoms < 1)
      fail(ErrorCode::Malformed, "budget caps must be at least 1");
  }
};

inline std::string vertex_name(std::size_t i) { return std::string(1, static_cast<char>('a' + i)); }

/// Every digraph on n labelled vertices, in order of the adjacency bit code.
/// The same Digraph object is reused between calls.
template <class F>
void for_each_digraph(std::size_t n, bool sc_only, F f) {
  if (n == 0 || n > 5) fail(ErrorCode::BudgetExceeded, "raw enumeration supports 1 to 5 vertices");
  Digraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex(vertex_name(i));
  const std::uint64_t total = std::uint64_t{1} << (n * n);
  for (std::uint64_t code = 0; code < total; ++code) {
    g.clear_edges();
    for (std::size_t b = 0; b < n * n; ++b)
      if ((code >> b) & 1U) g.add_edge(b / n, b % n);
    if (sc_only && !is_strongly_connected(g)) continue;
    f(g);
  }
}

inline std::vector<Digraph> enumerate_digraphs(std::size_t n, bool sc_only,
                                               const EnumerationBudget& budget = {}) {
  if (n > budget.max_vertices) fail(ErrorCode::BudgetExceeded, "n exceeds max_vertices");
  std::vector<Digraph> out;
  for_each_digraph(n, sc_only, [&](const Digraph& g) { out.push_back(g); });
  return out;
}

/// Smallest adjacency code over all vertex relabellings.
inline std::uint64_t canonical_code(const Digraph& g) {
  const std::size_t n = g.size();
  if (n > 5) fail(ErrorCode::BudgetExceeded, "canonical forms support up to 5 vertices");
  std::vector<Vertex> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t code = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (g.has_edge(perm[u], perm[v])) code |= std::uint64_t{1} << (u * n + v);
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// First labelled representative of each isomorphism class.
inline std::vector<Digraph> enumerate_digraphs_up_to_iso(std::size_t n, bool sc_only,
                                                         const EnumerationBudget& budget = {}) {
  if (n > budget.max_vertices) fail(ErrorCode::BudgetExceeded, "n exceeds max_vertices");
  std::set<std::uint64_t> seen;
  std::vector<Digraph> out;
  for_each_digraph(n, sc_only, [&](const Digraph& g) {
    if (seen.insert(canonical_code(g)).second) out.push_back(g);
  });
  return out;
}

inline std::vector<DigraphMap> enumerate_epimorphisms(const Digraph& B, const Digraph& A,
                                                      const EnumerationBudget& budget = {}) {
  if (B.size() > std::max<std::size_t>(budget.max_vertices, 8) || A.size() > B.size() + 8)
    fail(ErrorCode::BudgetExceeded, "too many vertex functions");
  std::vector<DigraphMap> out;
  if (A.size() == 0) return out;
  DigraphMap m{B, A, std::vector<Vertex>(B.size(), 0)};
  for (;;) {
    if (is_epimorphism(m)) out.push_back(m);
    std::size_t i = 0;
    while (i < B.size() && ++m.assignment[i] == A.size()) m.assignment[i++] = 0;
    if (i == B.size()) return out;
  }
}

/// Pairwise reachability by breadth-first search from every vertex.
inline bool brute_strongly_connected(const Digraph& g) {
  const std::size_t n = g.size();
  if (n == 0) return false;
  for (Vertex u = 0; u < n; ++u) {
    std::vector<bool> reached(n, false);
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < n; ++v)
      if (g.has_edge(u, v) && !reached[v]) {
        reached[v] = true;
        queue.push_back(v);
      }
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (Vertex v = 0; v < n; ++v)
        if (g.has_edge(queue[h], v) && !reached[v]) {
          reached[v] = true;
          queue.push_back(v);
        }
    if (std::find(reached.begin(), reached.end(), false) != reached.end()) return false;
  }
  return true;
}

namespace detail {

/// Depth-first search over projecting walks; (depth, vertex) pairs already
/// explored are not revisited.
struct ProjectingDfs {
  const DigraphMap& phi;
  const EpWalk& abar;
  std::size_t m;
  std::size_t k;
  std::set<std::pair<std::size_t, Vertex>> explored;
  std::size_t deepest = 0;
  std::set<Vertex> last;

  void run(std::size_t i, Vertex b) {
    if (!explored.insert({i, b}).second) return;
    deepest = std::max(deepest, i);
    if (i == k) {
      last.insert(b);
      return;
    }
    const Vertex target = abar.at(m + i + 1);
    for (Vertex y = 0; y < phi.dom.size(); ++y)
      if (phi.dom.has_edge(b, y) && phi.assignment[y] == target) run(i + 1, y);
  }

  void run_all() {
    for (Vertex b = 0; b < phi.dom.size(); ++b)
      if (phi.assignment[b] == abar.at(m)) run(0, b);
  }
};

}  // namespace detail

inline constexpr std::size_t kMaxWalkLength = 100000;

/// Is there a walk of length k in dom(phi) projecting onto abar(m..m+k)?
inline bool brute_projecting_walk(const DigraphMap& phi, const EpWalk& abar, std::size_t m,
                                  std::size_t k) {
  if (k > kMaxWalkLength) fail(ErrorCode::BudgetExceeded, "walk length too large");
  detail::ProjectingDfs dfs{phi, abar, m, k, {}, 0, {}};
  dfs.run_all();
  return !dfs.last.empty();
}

/// Length of the longest projecting walk from m, capped at k. Equals k
/// exactly when a length-k walk exists.
inline std::size_t brute_longest_projecting_walk(const DigraphMap& phi, const EpWalk& abar,
                                                 std::size_t m, std::size_t k) {
  if (k > kMaxWalkLength) fail(ErrorCode::BudgetExceeded, "walk length too large");
  detail::ProjectingDfs dfs{phi, abar, m, k, {}, 0, {}};
  bool any = false;
  for (Vertex b = 0; b < phi.dom.size(); ++b) any = any || phi.assignment[b] == abar.at(m);
  dfs.run_all();
  return any ? dfs.deepest : 0;
}

/// Last vertices of all length-k projecting walks from m.
inline Mask brute_last_vertices(const DigraphMap& phi, const EpWalk& abar, std::size_t m,
                                std::size_t k) {
  detail::ProjectingDfs dfs{phi, abar, m, k, {}, 0, {}};
  dfs.run_all();
  Mask out = 0;
  for (Vertex b : dfs.last) out |= Mask{1} << b;
  return out;
}

struct LiftExistence {
  bool weak = false;
  bool diligent = false;
};

/// Decides both lifting questions on the product of one period of abar with
/// dom(phi). An eventually periodic lift ends in a cycle of the product; it
/// can be diligent iff the cycle edges of some one component cover dom(phi).
inline LiftExistence brute_lift_existence(const DigraphMap& phi, const EpWalk& abar) {
  const std::size_t p = abar.period.size(), pre = abar.preamble.size(), n = phi.dom.size();
  std::vector<std::pair<std::size_t, Vertex>> nodes;
  for (std::size_t r = 0; r < p; ++r)
    for (Vertex b = 0; b < n; ++b)
      if (phi(b) == abar.at(pre + r)) nodes.push_back({r, b});
  const std::size_t N = nodes.size();
  std::vector<std::vector<bool>> adj(N, std::vector<bool>(N, false));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      adj[i][j] = nodes[j].first == (nodes[i].first + 1) % p &&
                  phi.dom.has_edge(nodes[i].second, nodes[j].second);
  auto reach = adj;  // transitive closure, Warshall
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t i = 0; i < N; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < N; ++j) reach[i][j] = reach[i][j] || reach[k][j];
  LiftExistence out;
  const auto all_edges = phi.dom.edges();
  for (std::size_t root = 0; root < N; ++root) {
    if (!reach[root][root]) continue;
    out.weak = true;
    std::set<std::pair<Vertex, Vertex>> covered;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (adj[i][j] && reach[root][i] && reach[i][root] && reach[root][j] && reach[j][root])
          covered.insert({nodes[i].second, nodes[j].second});
    if (covered.size() == all_edges.size()) out.diligent = true;
  }
  return out;
}

/// Proper nonzero atom sets mapped into themselves, searched directly.
inline bool brute_incompressible(const FiniteDynSys& sys) {
  const std::size_t n = sys.size();
  for (std::uint32_t x = 1; x + 1 < (std::uint32_t{1} << n); ++x) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if ((x >> i) & 1U) closed = (x >> sys.alpha[i]) & 1U;
    if (closed) return false;
  }
  return true;
}

/// Closed walks of length <= max_period traversing every edge, primitive and
/// least among their rotations, as periodic walks with empty preamble.
inline std::vector<EpWalk> enumerate_diligent_periods(const Digraph& A, std::size_t max_period) {
  std::vector<EpWalk> out;
  const std::size_t edges = A.edge_count();
  std::vector<Vertex> seq;
  auto is_canonical = [&](const std::vector<Vertex>& s) {
    const std::size_t L = s.size();
    for (std::size_t r = 1; r < L; ++r) {
      std::vector<Vertex> rot(s.begin() + static_cast<long>(r), s.end());
      rot.insert(rot.end(), s.begin(), s.begin() + static_cast<long>(r));
      if (rot <= s) return false;  // equal rotation means not primitive
    }
    return true;
  };
  auto covers = [&](const std::vector<Vertex>& s) {
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t i = 0; i < s.size(); ++i) seen.insert({s[i], s[(i + 1) % s.size()]});
    return seen.size() == edges;
  };
  auto grow = [&](auto& self, std::size_t L) -> void {
    if (seq.size() == L) {
      if (A.has_edge(seq.back(), seq.front()) && covers(seq) && is_canonical(seq))
        out.push_back(EpWalk{{}, seq});
      return;
    }
    for (Vertex v = seq.empty() ? 0 : 0; v < A.size(); ++v) {
      if (!seq.empty() && !A.has_edge(seq.back(), v)) continue;
      seq.push_back(v);
      self(self, L);
      seq.pop_back();
    }
  };
  for (std::size_t L = edges; L <= max_period; ++L) grow(grow, L);
  return out;
}

struct LiftingInstance {
  const DigraphMap& phi;
  const EpWalk& abar;
};

/// Strongly connected A (up to isomorphism, at most max_codomain vertices),
/// strongly connected B (up to isomorphism, |A| <= |B| <= max_vertices), every
/// epimorphism B -> A, and every diligent period of A up to max_period.
template <class F>
void for_each_lifting_instance(const EnumerationBudget& budget, F f) {
  budget.validate();
  std::vector<std::vector<Digraph>> sc(budget.max_vertices + 1);
  for (std::size_t n = 1; n <= budget.max_vertices; ++n)
    sc[n] = enumerate_digraphs_up_to_iso(n, true, {.max_vertices = budget.max_vertices});
  for (std::size_t na = 1; na <= std::min(budget.max_codomain, budget.max_vertices); ++na)
    for (const Digraph& A : sc[na]) {
      auto walks = enumerate_diligent_periods(A, budget.max_period);
      if (walks.empty()) continue;
      for (std::size_t nb = na; nb <= budget.max_vertices; ++nb)
        for (const Digraph& B : sc[nb])
          for (const DigraphMap& phi : enumerate_epimorphisms(B, A, budget))
            for (const EpWalk& abar : walks) f(LiftingInstance{phi, abar});
    }
}

/// One disagreement between a fast path and its reference.
struct Failure {
  std::string check;
  std::string input;
  std::string expected;
  std::string got;
};

struct Report {
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::uint64_t seed = 0;
  std::vector<Failure> failures;
  std::vector<Failure> findings;  // expected-possible discrepancies, e.g. conjectures under test

  void check(bool ok, const std::string& name, const std::function<std::string()>& input,
             const std::string& expected, const std::string& got) {
    ++checks;
    if (!ok) failures.push_back({name, input(), expected, got});
  }

  void merge(const Report& o) {
    instances += o.instances;
    checks += o.checks;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    findings.insert(findings.end(), o.findings.begin(), o.findings.end());
  }
};

inline io::json to_json(const Report& r) {
  auto rows = [](const std::vector<Failure>& fs) {
    io::json out = io::json::array();
    for (const auto& f : fs)
      out.push_back({{"check", f.check}, {"input", f.input}, {"expected", f.expected}, {"got", f.got}});
    return out;
  };
  return {{"instances", r.instances},
          {"checks", r.checks},
          {"seed", r.seed},
          {"failures", rows(r.failures)},
          {"findings", rows(r.findings)}};
}

inline std::string describe(const DigraphMap& phi, const EpWalk& abar) {
  return io::json{{"phi", io::to_json(phi)}, {"abar", io::to_json(phi.cod, abar)}}.dump();
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

/// Digraph-level checks over every digraph with up to max_vertices vertices.
inline Report crosscheck_digraphs(const EnumerationBudget& budget) {
  Report r;
  for (std::size_t n = 1; n <= std::min<std::size_t>(budget.max_vertices, 4); ++n)
    for_each_digraph(n, false, [&](const Digraph& g) {
      ++r.instances;
      auto input = [&] { return io::to_json(g).dump(); };
      const bool fast = is_strongly_connected(g);
      const bool brute = brute_strongly_connected(g);
      r.check(fast == brute, "is_strongly_connected", input, yes_no(brute), yes_no(fast));
      bool degrees = true;
      for (Vertex v = 0; v < n; ++v) degrees = degrees && g.out_mask(v) && g.in_mask(v);
      bool diligent = false;
      if (degrees && fast) diligent = is_diligent(g, diligent_schedule(g));
      r.check(fast == (degrees && diligent), "strongly_connected_iff_diligent_schedule", input,
              yes_no(fast), yes_no(degrees && diligent));
      if (fast) {
        Walk w = covering_closed_walk(g, 0, n - 1);
        std::set<std::pair<Vertex, Vertex>> seen;
        for (std::size_t i = 0; i + 1 < w.steps.size(); ++i) seen.insert({w.steps[i], w.steps[i + 1]});
        const bool ok = is_walk(g, w) && w.steps.front() == 0 && w.steps.back() == n - 1 &&
                        seen.size() == g.edge_count() &&
                        w.length() <= g.edge_count() * (n + 1);
        r.check(ok, "covering_closed_walk", input, "covering walk within bound", "violation");
      }
    });
  return r;
}

/// Fast compatibility against exhaustive search over epimorphism pairs.
inline Report crosscheck_compatibility(const EnumerationBudget& budget) {
  Report r;
  const std::size_t nmax = std::min<std::size_t>(budget.max_vertices, 3);
  std::vector<Digraph> domains;
  for (std::size_t n = 1; n <= nmax; ++n)
    for (auto& g : enumerate_digraphs_up_to_iso(n, true, {.max_vertices = nmax})) domains.push_back(g);
  for (std::size_t na = 1; na <= std::min(budget.max_codomain, nmax); ++na)
    for (const Digraph& A : enumerate_digraphs_up_to_iso(na, true, {.max_vertices = nmax})) {
      std::vector<DigraphMap> epis;
      for (const Digraph& B : domains)
        for (auto& m : enumerate_epimorphisms(B, A, budget)) epis.push_back(m);
      for (std::size_t i = 0; i < epis.size(); ++i)
        for (std::size_t j = i; j < epis.size(); ++j) {
          ++r.instances;
          const DigraphMap &phi = epis[i], &psi = epis[j];
          auto input = [&] {
            return io::json{{"phi", io::to_json(phi)}, {"psi", io::to_json(psi)}}.dump();
          };
          const bool fast = compatible_fast(phi, psi);
          auto w = compatible_exact(phi, psi);
          const bool exact = w.has_value();
          r.check(!fast || exact, "pullback_sc_implies_compatible", input, "true", yes_no(exact));
          if (w) r.check(validate_witness(phi, psi, *w), "witness_validates", input, "true", "false");
          r.check(exact == compatible_by_components(phi, psi).has_value(),
                  "exact_matches_component_closure", input, yes_no(exact), yes_no(!exact));
          ++r.checks;
          if (fast != exact) r.findings.push_back({"compatible_fast_vs_exact", input(), yes_no(exact), yes_no(fast)});
        }
    }
  return r;
}

/// State-space and dichotomy checks over the lifting enumeration.
inline Report crosscheck_lifting(const EnumerationBudget& budget) {
  Report r;
  for_each_lifting_instance(budget, [&](LiftingInstance inst) {
    ++r.instances;
    const DigraphMap& phi = inst.phi;
    const EpWalk& abar = inst.abar;
    auto input = [&] { return describe(phi, abar); };
    // test hook: trajectories of the reversed domain stand in for the real ones
    DigraphMap stepped = phi;
    if (budget.mutant) {
      Digraph rev(phi.dom.labels());
      for (auto [u, v] : phi.dom.edges()) rev.add_edge(v, u);
      stepped.dom = rev;
    }
    StateSpace ss = build_state_space(phi);
    r.check(ss.states.size() == state_count_formula(phi), "state_count", input,
            std::to_string(state_count_formula(phi)), std::to_string(ss.states.size()));
    r.check(is_epimorphism(ss.natural_map()), "natural_map_epimorphism", input, "true", "false");
    const std::size_t H = horizon_bound(phi, abar);
    for (std::size_t m = 0; m < abar.period.size(); ++m) {
      auto traj = state_trajectory(stepped, abar, m, 8);
      for (std::size_t k = 0; k <= 8; ++k) {
        const Mask brute = brute_last_vertices(phi, abar, m, k);
        r.check(traj[k] == brute, "trajectory_k" + std::to_string(k), input,
                std::to_string(brute), std::to_string(traj[k]));
      }
      const bool fast = never_empty_from(stepped, abar, m);
      const bool brute = brute_longest_projecting_walk(phi, abar, m, H) == H;
      r.check(fast == brute, "never_empty_from", input, yes_no(brute), yes_no(fast));
    }
    auto weak = weak_dichotomy(phi, abar);
    r.check(verify_outcome(phi, abar, weak, false).ok(), "weak_outcome_verifies", input, "ok",
            "failed");
    const LiftExistence exists = brute_lift_existence(phi, abar);
    r.check(weak.is_lift() == exists.weak, "weak_lift_exists", input, yes_no(exists.weak),
            yes_no(weak.is_lift()));
    auto dil = diligent_dichotomy(phi, abar);
    r.check(dil.is_lift() == exists.diligent, "diligent_lift_exists", input,
            yes_no(exists.diligent), yes_no(dil.is_lift()));
    r.check(verify_outcome(phi, abar, dil, true).ok(), "diligent_outcome_verifies", input, "ok",
            "failed");
    if (dil.audit.homogeneous)
      r.check(check_observations(phi, abar, *dil.audit.homogeneous).all(), "observations", input,
              "all hold", "violated");
  });
  return r;
}

/// Incompressibility against strong connectivity of every hitting digraph.
inline Report crosscheck_dynsys(const EnumerationBudget& budget) {
  Report r;
  for (std::size_t k = 1; k <= std::min<std::size_t>(budget.max_atoms, 6); ++k) {
    FiniteDynSys sys;
    for (std::size_t i = 0; i < k; ++i) sys.atoms.push_back(std::to_string(i));
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    auto partitions = all_partitions(k);
    do {
      sys.alpha = perm;
      ++r.instances;
      bool all_sc = true;
      for (const auto& P : partitions) all_sc = all_sc && is_strongly_connected(hitting_digraph(sys, P));
      const bool inc = is_incompressible(sys);
      auto input = [&] { return io::to_json(sys).dump(); };
      r.check(inc == all_sc, "incompressible_iff_all_hitting_sc", input, yes_no(all_sc), yes_no(inc));
      r.check(inc == brute_incompressible(sys), "incompressible_brute", input,
              yes_no(brute_incompressible(sys)), yes_no(inc));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return r;
}

inline Report crosscheck_suite(const EnumerationBudget& budget) {
  budget.validate();
  Report r;
  r.seed = budget.sample_seed;
  r.merge(crosscheck_digraphs(budget));
  r.merge(crosscheck_compatibility(budget));
  r.merge(crosscheck_lifting(budget));
  r.merge(crosscheck_dynsys(budget));
  return r;
}

}  // namespace shiftdg::oracle
