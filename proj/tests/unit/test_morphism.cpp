#include <gtest/gtest.h>

#include "shiftdg/dynsys.hpp"
#include "shiftdg/fixtures.hpp"
#include "shiftdg/oracle.hpp"

using namespace shiftdg;
using fixtures::map_by_labels;

namespace {

// Naive reference: every nonempty vertex subset of the pullback, checked with
// the brute reachability test.
bool naive_compatible(const DigraphMap& phi, const DigraphMap& psi) {
  Pullback pb = pullback(phi, psi);
  const std::size_t n = pb.digraph.size();
  for (Mask s = 1; s < (Mask{1} << n); ++s) {
    auto subset = bits_of(s);
    DigraphMap p1 = restrict_map(pb.proj1, subset), p2 = restrict_map(pb.proj2, subset);
    if (oracle::brute_strongly_connected(p1.dom) && is_epimorphism(p1) && is_epimorphism(p2)) return true;
  }
  return false;
}

std::vector<DigraphMap> epis_onto(const Digraph& A, std::size_t max_dom) {
  std::vector<DigraphMap> out;
  for (std::size_t n = 1; n <= max_dom; ++n)
    for (const auto& B : oracle::enumerate_digraphs_up_to_iso(n, true, {.max_vertices = max_dom}))
      for (auto& m : oracle::enumerate_epimorphisms(B, A)) out.push_back(m);
  return out;
}

}  // namespace

TEST(Morphism, EpimorphismExamples) {
  auto f = fixtures::nogo();
  EXPECT_TRUE(is_epimorphism(identity_map(f.A3)));
  EXPECT_TRUE(is_epimorphism(f.fold));
  Digraph loops({"a", "b"}, {{"a", "a"}, {"b", "b"}});
  Digraph xy({"x", "y"}, {{"x", "y"}, {"y", "x"}});
  DigraphMap m = map_by_labels(loops, xy, {{"a", "x"}, {"b", "y"}});
  EXPECT_FALSE(is_epimorphism(m));
  EXPECT_EQ(epimorphism_defect(m).value(), "edge (a,a) maps to a non-edge");
  DigraphMap notonto{fixtures::loop_vertex(), fixtures::two_cycle(), {0}};
  EXPECT_EQ(epimorphism_defect(notonto).value(), "not surjective");
  Digraph cyc({"x", "y"}, {{"x", "y"}, {"y", "x"}});
  Digraph extra({"x", "y"}, {{"x", "y"}, {"y", "x"}, {"x", "x"}});
  EXPECT_EQ(epimorphism_defect(DigraphMap{cyc, extra, {0, 1}}).value(), "edge (x,x) has no preimage");
}

TEST(Morphism, RequireTotalRejectsPartialMaps) {
  EXPECT_THROW(require_total(DigraphMap{fixtures::two_cycle(), fixtures::loop_vertex(), {0}}), Error);
  EXPECT_THROW(require_total(DigraphMap{fixtures::two_cycle(), fixtures::loop_vertex(), {0, 1}}), Error);
}

TEST(Morphism, ComposeExamples) {
  auto f = fixtures::nogo();
  EXPECT_EQ(compose(identity_map(f.A3), f.fold), f.fold);
  EXPECT_EQ(compose(f.fold, identity_map(f.B4)), f.fold);
  EXPECT_THROW(compose(f.fold, f.cycle), Error);
}

TEST(Morphism, NaturalMapsOfPartitionChainCompose) {
  FiniteDynSys sys = cycle_system(4);
  const Partition fine = atom_partition(sys), mid{0b0011, 0b1100}, coarse{0b1111};
  DigraphMap a = natural_partition_map(fine, mid, sys), b = natural_partition_map(mid, coarse, sys);
  EXPECT_EQ(compose(b, a), natural_partition_map(fine, coarse, sys));
}

TEST(Morphism, EpimorphismsComposeOverEnumeration) {
  Digraph A = fixtures::loop_vertex();
  std::size_t pairs = 0;
  for (std::size_t nb = 1; nb <= 3; ++nb)
    for (const auto& B : oracle::enumerate_digraphs_up_to_iso(nb, true))
      for (const auto& g : oracle::enumerate_epimorphisms(B, fixtures::two_cycle()))
        for (std::size_t nc = 1; nc <= 3; ++nc)
          for (const auto& C : oracle::enumerate_digraphs_up_to_iso(nc, true))
            for (const auto& h : oracle::enumerate_epimorphisms(C, B)) {
              ASSERT_TRUE(is_epimorphism(compose(g, h)));
              ++pairs;
            }
  EXPECT_GT(pairs, 0u);
  (void)A;
}

TEST(Morphism, PullbackExamples) {
  Digraph a3 = fixtures::path3();
  Pullback diag = pullback(identity_map(a3), identity_map(a3));
  EXPECT_EQ(diag.digraph.size(), a3.size());
  EXPECT_EQ(diag.digraph.edge_count(), a3.edge_count());
  EXPECT_EQ(diag.digraph.label(0), "(A,A)");

  auto f = fixtures::nogo();
  Pullback pb = pullback(f.fold, f.cycle);
  EXPECT_EQ(pb.digraph.size(), 6u);
  EXPECT_FALSE(is_strongly_connected(pb.digraph));
  EXPECT_TRUE(commutes(pb.proj1, pb.proj2, f.fold, f.cycle));
  EXPECT_THROW(pullback(f.fold, identity_map(f.B4)), Error);
}

// The pullback can carry more edges than the meets' own hitting digraph,
// since the two coordinates need not move along one orbit.
TEST(Morphism, HittingDigraphOfMeetsSitsInsidePullback) {
  FiniteDynSys sys = cycle_system(4);
  const Partition coarse{0b0101, 0b1010}, p{0b0001, 0b0100, 0b1010}, q{0b0101, 0b0010, 0b1000};
  Pullback pb = pullback(natural_partition_map(p, coarse, sys), natural_partition_map(q, coarse, sys));
  // matching pairs (x,y) correspond to the nonzero meets x & y
  Partition meets;
  std::vector<Vertex> vertex_of;
  for (Vertex v = 0; v < pb.digraph.size(); ++v) {
    Element m = p[pb.proj1(v)] & q[pb.proj2(v)];
    if (m) {
      meets.push_back(m);
      vertex_of.push_back(v);
    }
  }
  Digraph h = hitting_digraph(sys, meets);
  for (Vertex i = 0; i < meets.size(); ++i)
    for (Vertex j = 0; j < meets.size(); ++j)
      if (h.has_edge(i, j)) { EXPECT_TRUE(pb.digraph.has_edge(vertex_of[i], vertex_of[j])); }
}

TEST(Morphism, CompatibilityExamples) {
  auto f = fixtures::nogo();
  auto id = identity_map(f.A3);
  EXPECT_TRUE(compatible_fast(id, id));
  auto w = compatible_exact(id, id);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->subset.size(), 3u);
  EXPECT_TRUE(validate_witness(id, id, *w));
  EXPECT_FALSE(compatible_fast(f.fold, f.cycle));
  EXPECT_FALSE(compatible_exact(f.fold, f.cycle).has_value());
  EXPECT_FALSE(compatible_by_components(f.fold, f.cycle).has_value());
  EXPECT_THROW(compatible_fast(f.fold, identity_map(f.B4)), Error);
  DigraphMap partial{f.B4, f.A3, {0, 1}};
  EXPECT_THROW(compatible_exact(partial, partial), Error);
}

TEST(Morphism, ExactSearchRespectsCap) {
  auto f = fixtures::nogo();
  try {
    compatible_exact(f.fold, f.cycle, {.max_vertices = 5});
    FAIL() << "expected SearchTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SearchTooLarge);
  }
}

TEST(Morphism, NaturalMapsIntoCommonCoarsePartitionAreCompatible) {
  FiniteDynSys sys = cycle_system(4);
  const Partition coarse{0b0101, 0b1010};
  std::size_t pairs = 0;
  for (const auto& p : all_partitions(4))
    for (const auto& q : all_partitions(4)) {
      if (!refines(p, coarse) || !refines(q, coarse)) continue;
      auto a = natural_partition_map(p, coarse, sys), b = natural_partition_map(q, coarse, sys);
      auto w = compatible_exact(a, b);
      ASSERT_TRUE(w.has_value());
      EXPECT_TRUE(validate_witness(a, b, *w));
      ++pairs;
    }
  EXPECT_EQ(pairs, 16u);  // each block of size 2 is kept or split
}

// A strongly connected pullback always carries the standard projections as
// a witness; the converse fails. Over the loop vertex, two copies of the
// 2-cycle have a pullback made of two disjoint 2-cycles, yet the diagonal
// alone reconciles them.
TEST(Morphism, PullbackConnectivityIsNotNecessaryForCompatibility) {
  Digraph two = fixtures::two_cycle();
  DigraphMap c{two, fixtures::loop_vertex(), {0, 0}};
  EXPECT_FALSE(compatible_fast(c, c));
  auto w = compatible_exact(c, c);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->subset.size(), 2u);
  EXPECT_TRUE(validate_witness(c, c, *w));
}

TEST(Morphism, ExactAgreesWithNaiveSearchAndComponentClosure) {
  std::size_t checked = 0, fast_only_gaps = 0;
  for (std::size_t na = 1; na <= 2; ++na)
    for (const auto& A : oracle::enumerate_digraphs_up_to_iso(na, true)) {
      auto epis = epis_onto(A, 3);
      for (std::size_t i = 0; i < epis.size(); ++i)
        for (std::size_t j = i; j < epis.size(); ++j) {
          const auto &phi = epis[i], &psi = epis[j];
          auto w = compatible_exact(phi, psi);
          ASSERT_EQ(w.has_value(), naive_compatible(phi, psi));
          ASSERT_EQ(w.has_value(), compatible_by_components(phi, psi).has_value());
          if (w) { ASSERT_TRUE(validate_witness(phi, psi, *w)); }
          if (compatible_fast(phi, psi)) { ASSERT_TRUE(w.has_value()); }
          fast_only_gaps += w.has_value() && !compatible_fast(phi, psi);
          ++checked;
        }
    }
  EXPECT_GT(checked, 1000u);
  EXPECT_GT(fast_only_gaps, 0u);
}

TEST(Morphism, CommutesExamples) {
  Digraph a3 = fixtures::path3();
  auto id = identity_map(a3);
  EXPECT_TRUE(commutes(id, id, id, id));
  auto f = fixtures::nogo();
  DigraphMap other = f.fold;
  other.assignment[f.B4.at("Dbar")] = f.A3.at("C");
  Pullback pb = pullback(f.fold, f.fold);
  EXPECT_TRUE(commutes(pb.proj1, pb.proj2, f.fold, f.fold));
  EXPECT_FALSE(commutes(pb.proj1, pb.proj2, f.fold, other));
  EXPECT_THROW(commutes(pb.proj1, pb.proj2, f.fold, f.cycle), Error);
}
