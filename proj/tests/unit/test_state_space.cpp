#include <gtest/gtest.h>

#include "shiftdg/fixtures.hpp"
#include "shiftdg/oracle.hpp"

using namespace shiftdg;

namespace {

Mask mask_of(const Digraph& g, std::initializer_list<const char*> labels) {
  Mask m = 0;
  for (const char* l : labels) m |= bit(g.at(l));
  return m;
}

bool projects_from(const DigraphMap& phi, const EpWalk& walk, const EpWalk& abar, std::size_t start) {
  if (!is_walk(phi.dom, walk)) return false;
  const std::size_t horizon = start + walk.preamble.size() + abar.preamble.size() +
                              2 * walk.period.size() * abar.period.size() + 2;
  for (std::size_t n = start; n < horizon; ++n)
    if (phi(walk.at(n)) != abar.at(n)) return false;
  return true;
}

const oracle::EnumerationBudget kSmall{.max_vertices = 3, .max_codomain = 2, .max_period = 4};

}  // namespace

TEST(StateSpace, IdentityHasSingletonStates) {
  Digraph a3 = fixtures::path3();
  StateSpace ss = build_state_space(identity_map(a3));
  ASSERT_EQ(ss.states.size(), 4u);
  EXPECT_EQ(ss.states[0], 0u);
  DigraphMap pi = ss.natural_map();
  EXPECT_TRUE(same_labelled(pi.dom, Digraph({"{A}", "{B}", "{C}"}, {{"{A}", "{A}"}, {"{A}", "{B}"},
                                                                    {"{B}", "{A}"}, {"{B}", "{B}"},
                                                                    {"{B}", "{C}"}, {"{C}", "{B}"},
                                                                    {"{C}", "{C}"}})));
}

TEST(StateSpace, StateCountsForFigureMaps) {
  EXPECT_EQ(build_state_space(fixtures::fibers_121()).states.size(), 6u);
  EXPECT_EQ(build_state_space(fixtures::fibers_222()).states.size(), 10u);
  EXPECT_EQ(state_count_formula(fixtures::fibers_222()), 10u);
}

TEST(StateSpace, EmptyStateIsAbsorbing) {
  StateSpace ss = build_state_space(fixtures::nogo().cycle);
  Digraph g = ss.digraph();
  const Vertex empty = ss.index_of(0);
  EXPECT_TRUE(g.has_edge(empty, empty));
  EXPECT_EQ(g.out_mask(empty), bit(empty));
}

TEST(StateSpace, RejectsNonEpimorphism) {
  DigraphMap m{fixtures::loop_vertex(), fixtures::two_cycle(), {0}};
  EXPECT_THROW(build_state_space(m), Error);
}

TEST(StateSpace, StepExamples) {
  auto f = fixtures::nogo();
  const Vertex A = f.A3.at("A"), B = f.A3.at("B"), C = f.A3.at("C");
  EXPECT_EQ(step_state(f.cycle, mask_of(f.V4, {"C'"}), {C, B}), mask_of(f.V4, {"Bb"}));
  EXPECT_EQ(step_state(f.cycle, 0, {C, B}), 0u);
  // Bb has no arrow to C'
  EXPECT_EQ(step_state(f.cycle, mask_of(f.V4, {"Bb"}), {B, C}), 0u);
  EXPECT_THROW(step_state(f.cycle, mask_of(f.V4, {"A'"}), {B, C}), Error);
  EXPECT_THROW(step_state(f.cycle, mask_of(f.V4, {"A'"}), {A, C}), Error);
  // full fiber steps to the induced edge's target
  StateSpace ss = build_state_space(f.fold);
  const Mask fiberB = mask_of(f.B4, {"Bbar", "Dbar"});
  for (const auto& e : ss.edges)
    if (e.from == fiberB) {
      for (auto by : e.induced_by) EXPECT_EQ(step_state(f.fold, fiberB, by), e.to);
    }
}

TEST(StateSpace, TrajectoryExamples) {
  auto f = fixtures::nogo();
  EpWalk abar = f.schedule;
  auto id = state_trajectory(identity_map(f.A3), abar, 0, 12);
  for (std::size_t k = 0; k < id.size(); ++k) EXPECT_EQ(id[k], bit(abar.at(k)));

  // schedule: A A B B C B B C C B; start at the first C (index 4)
  auto traj = state_trajectory(f.cycle, abar, 4, 3);
  EXPECT_EQ(traj[0], mask_of(f.V4, {"C'"}));
  EXPECT_EQ(traj[1], mask_of(f.V4, {"Bb"}));
  EXPECT_EQ(traj[2], mask_of(f.V4, {"Bb"}));
  EXPECT_EQ(traj[3], 0u);

  auto fold = state_trajectory(f.fold, diligent_schedule(f.A3), 0, 200);
  for (State s : fold) EXPECT_NE(s, 0u);
  EXPECT_THROW(state_trajectory(f.fold, EpWalk{{}, {f.A3.at("A"), f.A3.at("C")}}, 0, 3), Error);
}

TEST(StateSpace, NeverEmptyExamples) {
  auto f = fixtures::nogo();
  for (const EpWalk& abar : {f.schedule, diligent_schedule(f.A3)})
    for (std::size_t start = 0; start < 15; ++start) {
      EXPECT_TRUE(never_empty_from(identity_map(f.A3), abar, start));
      EXPECT_TRUE(never_empty_from(f.fold, abar, start));
    }
  for (std::size_t start = 0; start < 15; ++start) EXPECT_FALSE(never_empty_from(f.cycle, f.schedule, start));
}

// A diligent walk over A3 that the cycle does follow: it zigzags A,B,C,B
// through the fixture without ever turning back at C before reaching A.
TEST(StateSpace, CycleFollowsSomeDiligentWalks) {
  auto f = fixtures::nogo();
  EpWalk zig;
  for (const char* v : {"A", "A", "B", "B", "C", "C", "B", "B"}) zig.period.push_back(f.A3.at(v));
  ASSERT_TRUE(is_diligent(f.A3, zig));
  EXPECT_TRUE(never_empty_from(f.cycle, zig, 0));
  EpWalk w = extract_projecting_walk(f.cycle, zig, 0);
  EXPECT_TRUE(projects_from(f.cycle, w, zig, 0));
}

TEST(StateSpace, ExtractExamples) {
  auto f = fixtures::nogo();
  EpWalk abar = diligent_schedule(f.A3);
  EpWalk id = extract_projecting_walk(identity_map(f.A3), abar, 0);
  EXPECT_TRUE(same_sequence(id, abar));

  EpWalk w = extract_projecting_walk(f.fold, abar, 0);
  EXPECT_TRUE(projects_from(f.fold, w, abar, 0));
  const std::size_t horizon = w.preamble.size() + 3 * w.period.size();
  for (std::size_t n = 0; n < horizon; ++n)
    if (abar.at(n) == f.A3.at("B")) { EXPECT_EQ(w.at(n), f.B4.at("Bbar")); }

  DigraphMap phi = fixtures::fibers_121();
  EpWalk sched = diligent_schedule(phi.cod);
  EXPECT_TRUE(projects_from(phi, extract_projecting_walk(phi, sched, 0), sched, 0));
  EXPECT_TRUE(projects_from(phi, extract_projecting_walk(phi, sched, 5), sched, 5));

  try {
    extract_projecting_walk(f.cycle, f.schedule, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoProjectingWalk);
  }
}

TEST(StateSpace, CountFormulaAndNaturalMapOverEnumeration) {
  std::size_t n = 0;
  for (std::size_t na = 1; na <= 3; ++na)
    for (const auto& A : oracle::enumerate_digraphs_up_to_iso(na, true))
      for (std::size_t nb = na; nb <= 4; ++nb)
        for (const auto& B : oracle::enumerate_digraphs_up_to_iso(nb, true))
          for (const auto& phi : oracle::enumerate_epimorphisms(B, A)) {
            StateSpace ss = build_state_space(phi);
            ASSERT_EQ(ss.states.size(), state_count_formula(phi));
            ASSERT_TRUE(is_epimorphism(ss.natural_map()));
            ++n;
          }
  EXPECT_GT(n, 10000u);
}

TEST(StateSpace, TrajectoryMatchesBruteLastVertices) {
  std::size_t n = 0;
  oracle::for_each_lifting_instance(kSmall, [&](const oracle::LiftingInstance& in) {
    for (std::size_t m = 0; m < in.abar.period.size(); ++m) {
      auto traj = state_trajectory(in.phi, in.abar, m, 8);
      for (std::size_t k = 0; k <= 8; ++k)
        ASSERT_EQ(traj[k], oracle::brute_last_vertices(in.phi, in.abar, m, k));
    }
    ++n;
  });
  EXPECT_GT(n, 100u);
}

TEST(StateSpace, NeverEmptyMatchesBoundedBruteSearch) {
  oracle::for_each_lifting_instance(kSmall, [&](const oracle::LiftingInstance& in) {
    const std::size_t H = horizon_bound(in.phi, in.abar);
    for (std::size_t m = 0; m < in.abar.period.size(); ++m) {
      const bool ne = never_empty_from(in.phi, in.abar, m);
      ASSERT_EQ(ne, oracle::brute_projecting_walk(in.phi, in.abar, m, H));
      if (ne) { ASSERT_TRUE(projects_from(in.phi, extract_projecting_walk(in.phi, in.abar, m), in.abar, m)); }
    }
  });
}
