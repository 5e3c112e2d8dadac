#include <gtest/gtest.h>

#include "shiftdg/fixtures.hpp"
#include "shiftdg/oracle.hpp"

using namespace shiftdg;

namespace {

std::vector<std::size_t> block(const OmegaPartitionSpec& spec, const std::string& label, std::size_t upto) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < upto; ++n)
    if (spec.labels[spec.coloring.at(n)] == label) out.push_back(n);
  return out;
}

OmegaPartitionSpec residues(std::size_t k) {
  OmegaPartitionSpec s;
  for (std::size_t i = 0; i < k; ++i) {
    s.labels.push_back("r" + std::to_string(i));
    s.coloring.period.push_back(i);
  }
  return s;
}

std::vector<Vertex> identity_iso(std::size_t n) {
  std::vector<Vertex> v(n);
  for (Vertex i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST(Realization, RealizeExamples) {
  OmegaPartitionSpec two = realize_digraph(fixtures::two_cycle());
  EXPECT_EQ(block(two, "a", 10), (std::vector<std::size_t>{0, 2, 4, 6, 8}));
  EXPECT_EQ(block(two, "b", 10), (std::vector<std::size_t>{1, 3, 5, 7, 9}));

  OmegaPartitionSpec loop = realize_digraph(fixtures::loop_vertex());
  EXPECT_EQ(block(loop, "a", 5).size(), 5u);

  Digraph a3 = fixtures::path3();
  OmegaPartitionSpec s = realize_digraph(a3);
  EXPECT_EQ(s.coloring.period, diligent_schedule(a3).period);
  EXPECT_TRUE(same_labelled(shift_hitting_digraph(s), a3));

  EXPECT_THROW(realize_digraph(Digraph({"x", "y"}, {{"x", "y"}})), Error);
}

TEST(Realization, SpecValidation) {
  OmegaPartitionSpec s{{"a", "b"}, {{1}, {0}}};
  EXPECT_THROW(require_spec(s), Error);  // b only in the preamble
  EXPECT_THROW(require_spec(OmegaPartitionSpec{{"a"}, {{}, {}}}), Error);
  EXPECT_THROW(require_spec(OmegaPartitionSpec{{"a", "a"}, {{}, {0, 1}}}), Error);
}

TEST(Realization, ShiftHittingExamples) {
  EXPECT_TRUE(same_labelled(shift_hitting_digraph(OmegaPartitionSpec{{"a", "b"}, {{}, {0, 1}}}),
                            fixtures::two_cycle()));
  EXPECT_TRUE(same_labelled(shift_hitting_digraph(OmegaPartitionSpec{{"a"}, {{}, {0}}}),
                            fixtures::loop_vertex()));
  // preamble transitions happen finitely often and leave no edge
  Digraph g = shift_hitting_digraph(OmegaPartitionSpec{{"a", "b"}, {{0, 0, 1, 1}, {0, 1}}});
  EXPECT_FALSE(g.has_edge(0, 0));
  EXPECT_FALSE(g.has_edge(1, 1));
}

TEST(Realization, RoundTripOverAllStronglyConnectedDigraphsUpToFourVertices) {
  std::size_t n = 0;
  for (std::size_t k = 1; k <= 4; ++k)
    oracle::for_each_digraph(k, true, [&](const Digraph& g) {
      OmegaPartitionSpec s = realize_digraph(g);
      ASSERT_TRUE(same_labelled(shift_hitting_digraph(s), g));
      ++n;
    });
  EXPECT_EQ(n, 1u + 4u + 144u + 25696u);
}

TEST(Realization, DiligentWalksGiveIsomorphicSpecs) {
  for (std::size_t k = 1; k <= 3; ++k)
    for (const auto& g : oracle::enumerate_digraphs_up_to_iso(k, true))
      for (const auto& w : oracle::enumerate_diligent_periods(g, 6)) {
        EpWalk shifted = w;
        shifted.preamble = backward_extend(g, w.period.front(), 3).steps;
        shifted.preamble.pop_back();
        for (const EpWalk& x : {w, shifted}) {
          ASSERT_TRUE(is_isomorphism(g, shift_hitting_digraph(spec_from_walk(g, x)), identity_iso(k)));
        }
      }
}

TEST(Realization, IsomorphismSearch) {
  Digraph g({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}, {"z", "x"}});
  Digraph h({"p", "q", "r"}, {{"q", "p"}, {"p", "r"}, {"r", "q"}});
  auto iso = find_isomorphism(g, h);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_isomorphism(g, h, *iso));
  // three rotations are isomorphisms; the least is returned
  EXPECT_EQ(*iso, (std::vector<Vertex>{0, 2, 1}));
  EXPECT_FALSE(find_isomorphism(g, fixtures::path3()).has_value());
}

TEST(Realization, WalkFromSpecExamples) {
  Digraph two = fixtures::two_cycle();
  OmegaPartitionSpec s{{"a", "b"}, {{}, {0, 1}}};
  EpWalk w = walk_from_spec(s, two, {0, 1});
  EXPECT_TRUE(same_sequence(w, EpWalk{{}, {0, 1}}));

  // "a a b" is not a walk in the 2-cycle; the repair keeps the period
  OmegaPartitionSpec garbage{{"a", "b"}, {{0, 0, 1}, {0, 1}}};
  EpWalk r = walk_from_spec(garbage, two, {0, 1});
  EXPECT_TRUE(is_walk(two, r));
  EXPECT_EQ(r.period, (std::vector<Vertex>{0, 1}));
  EXPECT_EQ(r.preamble.size(), 3u);

  Digraph a3 = fixtures::path3();
  OmegaPartitionSpec s3 = realize_digraph(a3);
  EpWalk back = walk_from_spec(s3, a3, identity_iso(3));
  EXPECT_EQ(spec_from_walk(a3, back), s3);

  Digraph rotated({"b", "a"}, {{"a", "b"}, {"b", "a"}});
  EXPECT_THROW(walk_from_spec(s, fixtures::path3(), {0, 1, 2}), Error);
  EpWalk wr = walk_from_spec(s, rotated, {1, 0});
  EXPECT_EQ(wr.period, (std::vector<Vertex>{1, 0}));
}

TEST(Realization, SpecRefinesExamples) {
  OmegaPartitionSpec two = residues(2), four = residues(4);
  auto id = spec_refines(two, two);
  ASSERT_TRUE(id.has_value());
  EXPECT_EQ(*id, identity_map(shift_hitting_digraph(two)));

  auto fold = spec_refines(four, two);
  ASSERT_TRUE(fold.has_value());
  EXPECT_EQ(fold->assignment, (std::vector<Vertex>{0, 1, 0, 1}));
  EXPECT_TRUE(is_epimorphism(*fold));
  EXPECT_FALSE(spec_refines(two, four).has_value());

  OmegaPartitionSpec three = residues(3);
  EXPECT_FALSE(spec_refines(three, two).has_value());
  EXPECT_FALSE(spec_refines(two, three).has_value());
  // eventual containment ignores the preambles
  OmegaPartitionSpec late = four;
  late.coloring.preamble = {2, 3, 0};
  EXPECT_TRUE(spec_refines(late, two).has_value());
}

TEST(Realization, SpecRefinesReturnsEpimorphismsOverResidueFamilies) {
  for (std::size_t a = 1; a <= 8; ++a)
    for (std::size_t b = 1; b <= 8; ++b) {
      auto m = spec_refines(residues(a), residues(b));
      ASSERT_EQ(m.has_value(), a % b == 0) << a << " " << b;
      if (m) ASSERT_TRUE(is_epimorphism(*m));
    }
}

TEST(Realization, PolarizeFixture) {
  auto f = fixtures::nogo();
  OmegaPartitionSpec spec = spec_from_walk(f.A3, f.schedule);

  Polarization fold = polarize_virtual_refinement(spec, VirtualRefinement{f.fold});
  ASSERT_TRUE(fold.realized());
  const Realized& r = std::get<Realized>(fold.result);
  EXPECT_TRUE(triangle_commutes(f.fold, r.iso, r.pi));
  for (Vertex v = 0; v < f.B4.size(); ++v)
    EXPECT_EQ(r.pi.cod.label(r.pi(r.iso[v])), f.A3.label(f.fold(v)));
  EXPECT_TRUE(spec_refines(r.fine, spec).has_value());

  Polarization cyc = polarize_virtual_refinement(spec, VirtualRefinement{f.cycle});
  ASSERT_FALSE(cyc.realized());
  const Incompatible& inc = std::get<Incompatible>(cyc.result);
  EXPECT_FALSE(compatible_exact(f.cycle, inc.psi).has_value());
  EXPECT_TRUE(find_isomorphism(inc.c, shift_hitting_digraph(inc.fine)).has_value());
  EXPECT_TRUE(verify_outcome(f.cycle, f.schedule, cyc.outcome, true).ok());

  Polarization id = polarize_virtual_refinement(spec, VirtualRefinement{identity_map(f.A3)});
  ASSERT_TRUE(id.realized());
  EXPECT_TRUE(spec_refines(std::get<Realized>(id.result).fine, spec).has_value());
}

TEST(Realization, PolarizeRejectsMismatchedInputs) {
  auto f = fixtures::nogo();
  try {
    polarize_virtual_refinement(realize_digraph(fixtures::two_cycle()), VirtualRefinement{f.fold});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BaseMismatch);
  }
  EpWalk not_diligent;
  for (const char* v : {"A", "B", "C", "B"}) not_diligent.period.push_back(f.A3.at(v));
  try {
    polarize_virtual_refinement(spec_from_walk(f.A3, not_diligent), VirtualRefinement{f.fold});
    FAIL();
  } catch (const Error& e) {
    // the loops are missing, so the recovered digraph differs from A3
    EXPECT_EQ(e.code(), ErrorCode::BaseMismatch);
  }
}

TEST(Realization, CycleSystemsEmbedThroughRealization) {
  for (std::size_t k = 1; k <= 6; ++k) {
    FiniteDynSys sys = cycle_system(k);
    Digraph h = hitting_digraph(sys, atom_partition(sys));
    OmegaPartitionSpec spec = realize_digraph(h);
    ElementSeq seq;
    for (std::size_t c : spec.coloring.period) seq.period.push_back(Element{1} << c);
    EXPECT_TRUE(is_shift_compatible(sys, seq));
    EXPECT_TRUE(induced_tail_is_embedding(sys, seq, 10 * k));
  }
}
