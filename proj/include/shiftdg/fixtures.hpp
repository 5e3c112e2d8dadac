#pragma once

#include "shiftdg/realization.hpp"

namespace shiftdg::fixtures {

inline Digraph two_cycle() { return Digraph({"a", "b"}, {{"a", "b"}, {"b", "a"}}); }

inline Digraph loop_vertex() { return Digraph({"a"}, {{"a", "a"}}); }

inline Digraph with_loops(std::vector<std::string> labels,
                          std::vector<std::pair<std::string, std::string>> edges) {
  for (const auto& l : labels) edges.emplace_back(l, l);
  return Digraph(std::move(labels), edges);
}

/// Path A - B - C, both directions, loops everywhere.
inline Digraph path3() {
  return with_loops({"A", "B", "C"}, {{"A", "B"}, {"B", "A"}, {"B", "C"}, {"C", "B"}});
}

inline DigraphMap map_by_labels(const Digraph& dom, const Digraph& cod,
                                const std::vector<std::pair<std::string, std::string>>& pairs) {
  DigraphMap m{dom, cod, std::vector<Vertex>(dom.size(), cod.size())};
  for (const auto& [x, y] : pairs) m.assignment[dom.at(x)] = cod.at(y);
  require_total(m);
  return m;
}

/// The pair of epimorphisms onto path3 whose pullback is not strongly
/// connected: a fold of a four-vertex path, and a directed four-cycle.
struct Nogo {
  Digraph A3;
  Digraph B4;
  DigraphMap fold;
  Digraph V4;
  DigraphMap cycle;
  EpWalk schedule;  // diligent in A3 and contains C,B,B,C
};

inline Nogo nogo() {
  Nogo f;
  f.A3 = path3();
  f.B4 = with_loops({"Abar", "Bbar", "Cbar", "Dbar"},
                    {{"Abar", "Bbar"}, {"Bbar", "Abar"}, {"Bbar", "Cbar"}, {"Cbar", "Bbar"},
                     {"Cbar", "Dbar"}, {"Dbar", "Cbar"}});
  f.fold = map_by_labels(f.B4, f.A3, {{"Abar", "A"}, {"Bbar", "B"}, {"Cbar", "C"}, {"Dbar", "B"}});
  f.V4 = with_loops({"A'", "Bt", "Bb", "C'"},
                    {{"A'", "Bt"}, {"Bt", "C'"}, {"C'", "Bb"}, {"Bb", "A'"}});
  f.cycle = map_by_labels(f.V4, f.A3, {{"A'", "A"}, {"Bt", "B"}, {"Bb", "B"}, {"C'", "C"}});
  // The loop at Dbar is only reachable through C,B,B,C, so the fold needs
  // that segment to lift diligently; the cycle cannot follow it.
  for (const char* v : {"A", "A", "B", "B", "C", "B", "B", "C", "C", "B"})
    f.schedule.period.push_back(f.A3.at(v));
  return f;
}

/// Epimorphism onto L <-> T <-> R with fiber sizes 1, 2, 1.
inline DigraphMap fibers_121() {
  Digraph A({"L", "T", "R"}, {{"L", "T"}, {"T", "L"}, {"T", "R"}, {"R", "T"}});
  Digraph B({"L0", "T0", "T1", "R0"}, {{"L0", "T0"}, {"T0", "L0"}, {"L0", "T1"}, {"T1", "L0"},
                                       {"R0", "T1"}, {"T1", "R0"}});
  return map_by_labels(B, A, {{"L0", "L"}, {"T0", "T"}, {"T1", "T"}, {"R0", "R"}});
}

/// Epimorphism onto a three-vertex digraph with every fiber of size 2.
inline DigraphMap fibers_222() {
  Digraph A({"T", "L", "R"}, {{"T", "L"}, {"L", "R"}, {"T", "R"}, {"R", "T"}});
  Digraph B({"L0", "L1", "R0", "R1", "T0", "T1"},
            {{"L0", "R0"}, {"L1", "R1"}, {"T0", "L1"}, {"T1", "L0"}, {"R0", "T0"}, {"R1", "T1"},
             {"T1", "R0"}});
  return map_by_labels(B, A, {{"L0", "L"}, {"L1", "L"}, {"R0", "R"}, {"R1", "R"}, {"T0", "T"},
                              {"T1", "T"}});
}

/// Pipeline over the nogo fixture. `mutate` adds the arrow Bb -> C' to V4,
/// which makes the pair compatible, so the incompatibility rows fail.
inline VerifyReport verify_nogo(bool mutate = false) {
  Nogo f = nogo();
  if (mutate) {
    f.V4.add_edge("Bb", "C'");
    f.cycle.dom = f.V4;
  }
  VerifyReport rep;
  rep.add("fold_is_epimorphism", is_epimorphism(f.fold));
  rep.add("cycle_is_epimorphism", is_epimorphism(f.cycle));
  Pullback pb = pullback(f.fold, f.cycle);
  rep.add("pullback_has_6_vertices", pb.digraph.size() == 6,
          std::to_string(pb.digraph.size()) + " vertices");
  rep.add("pullback_not_strongly_connected", !is_strongly_connected(pb.digraph),
          std::to_string(strongly_connected_components(pb.digraph).size()) + " components");
  rep.add("pullback_square_commutes", commutes(pb.proj1, pb.proj2, f.fold, f.cycle));
  rep.add("exact_incompatible", !compatible_exact(f.fold, f.cycle).has_value());

  const OmegaPartitionSpec spec = spec_from_walk(f.A3, f.schedule);
  auto fold_pol = polarize_virtual_refinement(spec, VirtualRefinement{f.fold});
  bool fold_ok = fold_pol.realized();
  if (fold_ok) {
    const auto& r = std::get<Realized>(fold_pol.result);
    fold_ok = triangle_commutes(f.fold, r.iso, r.pi) &&
              is_diligent(f.B4, fold_pol.outcome.lift().witness);
  }
  rep.add("polarize_fold_realized", fold_ok);
  bool cycle_ok = false;
  try {
    auto cyc_pol = polarize_virtual_refinement(spec, VirtualRefinement{f.cycle});
    if (!cyc_pol.realized()) {
      const auto& inc = std::get<Incompatible>(cyc_pol.result);
      cycle_ok = verify_outcome(f.cycle, f.schedule, cyc_pol.outcome, true).ok() &&
                 is_isomorphism(inc.c, shift_hitting_digraph(inc.fine), inc.iso);
    }
  } catch (const std::logic_error&) {
    cycle_ok = false;
  }
  rep.add("polarize_cycle_incompatible", cycle_ok);
  return rep;
}

}  // namespace shiftdg::fixtures
