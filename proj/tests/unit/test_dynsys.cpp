#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "shiftdg/fixtures.hpp"
#include "shiftdg/oracle.hpp"

using namespace shiftdg;

namespace {

FiniteDynSys perm_system(std::vector<std::size_t> perm) {
  FiniteDynSys sys;
  for (std::size_t i = 0; i < perm.size(); ++i) sys.atoms.push_back("t" + std::to_string(i));
  sys.alpha = std::move(perm);
  return sys;
}

std::vector<std::size_t> identity_perm(std::size_t k) {
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

TEST(DynSys, RejectsMalformedSystems) {
  EXPECT_THROW(require_valid(perm_system({0, 0})), Error);
  EXPECT_THROW(require_valid(perm_system({})), Error);
  FiniteDynSys dup = perm_system({1, 0});
  dup.atoms[1] = dup.atoms[0];
  EXPECT_THROW(require_valid(dup), Error);
}

TEST(DynSys, IncompressibleExamples) {
  EXPECT_TRUE(is_incompressible(perm_system({1, 0})));
  EXPECT_FALSE(is_incompressible(perm_system({0, 1})));
  for (std::size_t k = 1; k <= 8; ++k) EXPECT_TRUE(is_incompressible(cycle_system(k)));
  EXPECT_FALSE(is_incompressible(perm_system({1, 0, 3, 2})));
  EXPECT_FALSE(is_incompressible(perm_system({1, 2, 0, 3})));
}

TEST(DynSys, IncompressibleCriteriaAgreeOverAllPermutations) {
  for (std::size_t k = 1; k <= 7; ++k) {
    auto perm = identity_perm(k);
    do {
      FiniteDynSys sys = perm_system(perm);
      ASSERT_EQ(is_incompressible_orbits(sys), is_incompressible_brute(sys));
      ASSERT_EQ(is_incompressible_orbits(sys), oracle::brute_incompressible(sys));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(DynSys, PartitionCountsAreBellNumbers) {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (std::size_t n = 1; n <= 8; ++n) {
    auto parts = all_partitions(n);
    EXPECT_EQ(parts.size(), bell[n]);
    FiniteDynSys sys = cycle_system(n);
    for (const auto& P : parts) ASSERT_TRUE(is_partition(sys, P));
  }
  EXPECT_THROW(all_partitions(9), Error);
}

TEST(DynSys, HittingDigraphExamples) {
  FiniteDynSys c4 = cycle_system(4);
  Digraph g = hitting_digraph(c4, atom_partition(c4));
  EXPECT_EQ(g.edge_count(), 4u);
  for (Vertex i = 0; i < 4; ++i) EXPECT_TRUE(g.has_edge(i, (i + 1) % 4));

  // x = {t0}, fixed by alpha
  FiniteDynSys s = perm_system({0, 2, 1});
  Digraph h = hitting_digraph(s, {0b001, 0b110});
  EXPECT_TRUE(h.has_edge(0, 0));
  EXPECT_TRUE(h.has_edge(1, 1));
  EXPECT_FALSE(h.has_edge(0, 1));
  EXPECT_FALSE(h.has_edge(1, 0));
  EXPECT_FALSE(is_strongly_connected(h));

  // alpha(x) strictly inside x: one-way arrow out of x
  FiniteDynSys s2 = perm_system({1, 0, 2});
  Digraph h2 = hitting_digraph(s2, {0b011, 0b100});
  EXPECT_TRUE(h2.has_edge(0, 0));
  EXPECT_TRUE(h2.has_edge(1, 1));
  EXPECT_FALSE(is_strongly_connected(h2));

  Digraph one = hitting_digraph(c4, {0b1111});
  EXPECT_EQ(one.size(), 1u);
  EXPECT_TRUE(one.has_edge(0, 0));

  EXPECT_THROW(hitting_digraph(c4, {0b0011, 0b0110, 0b1000}), Error);
  EXPECT_THROW(hitting_digraph(c4, {0b0011}), Error);
}

TEST(DynSys, IncompressibleIffEveryHittingDigraphStronglyConnected) {
  for (std::size_t k = 1; k <= 6; ++k) {
    auto perm = identity_perm(k);
    auto parts = all_partitions(k);
    do {
      FiniteDynSys sys = perm_system(perm);
      bool all = true;
      for (const auto& P : parts) all = all && is_strongly_connected(hitting_digraph(sys, P));
      ASSERT_EQ(is_incompressible(sys), all);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(DynSys, NaturalMapExamples) {
  FiniteDynSys c4 = cycle_system(4);
  const Partition P{0b0011, 0b1100};
  EXPECT_TRUE(refines(P, P));
  EXPECT_EQ(natural_partition_map(P, P, c4), identity_map(hitting_digraph(c4, P)));
  for (const auto& Q : all_partitions(4)) EXPECT_TRUE(refines(atom_partition(c4), Q));
  try {
    natural_partition_map(P, {0b0101, 0b1010}, c4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotARefinement);
  }
}

TEST(DynSys, NaturalMapsAreEpimorphismsForEveryRefinementOnFiveAtoms) {
  auto parts = all_partitions(5);
  auto perm = identity_perm(5);
  std::size_t pairs = 0;
  do {
    FiniteDynSys sys = perm_system(perm);
    for (const auto& fine : parts)
      for (const auto& coarse : parts)
        if (refines(fine, coarse)) {
          ASSERT_TRUE(is_epimorphism(natural_partition_map(fine, coarse, sys)));
          ++pairs;
        }
  } while (std::next_permutation(perm.begin(), perm.end()));
  // 358 refinement pairs per permutation (OEIS A000258)
  EXPECT_EQ(pairs, 120u * 358u);
}

TEST(DynSys, NaturalMapsThroughCommonRefinementCommute) {
  FiniteDynSys sys = perm_system({1, 2, 0, 4, 3});
  auto parts = all_partitions(5);
  std::mt19937 rng(3);
  for (int t = 0; t < 300; ++t) {
    const Partition& P = parts[rng() % parts.size()];
    const Partition& Q = parts[rng() % parts.size()];
    Partition R = common_refinement(P, Q);
    ASSERT_TRUE(refines(R, P));
    ASSERT_TRUE(refines(R, Q));
    // a partition coarser than both
    Partition top{sys.one()};
    auto p = natural_partition_map(P, top, sys), q = natural_partition_map(Q, top, sys);
    auto rp = natural_partition_map(R, P, sys), rq = natural_partition_map(R, Q, sys);
    ASSERT_TRUE(commutes(rp, rq, p, q));
    ASSERT_EQ(compose(p, rp), natural_partition_map(R, top, sys));
  }
}

TEST(DynSys, ApproxUnderExamples) {
  const Partition P{0b0011, 0b1100};
  EXPECT_TRUE(approx_under(0b0101, 0b0101, P));
  EXPECT_TRUE(approx_under(0b0001, 0b0010, P));
  EXPECT_FALSE(approx_under(0b0001, 0b0100, P));
}

TEST(DynSys, SmallAndDenseExamples) {
  FiniteDynSys c3 = cycle_system(3);
  EXPECT_TRUE(is_eventually_small(c3, ElementSeq{{}, {1, 2, 4}}));
  EXPECT_FALSE(is_eventually_small(c3, ElementSeq{{}, {1, 6}}));
  EXPECT_TRUE(is_eventually_small(c3, ElementSeq{{7, 3}, {2}}));
  EXPECT_THROW(is_eventually_small(c3, ElementSeq{{}, {0, 1}}), Error);

  EXPECT_TRUE(is_eventually_dense(c3, ElementSeq{{}, {4, 2, 1}}));
  EXPECT_FALSE(is_eventually_dense(c3, ElementSeq{{4}, {1, 2}}));
  FiniteDynSys c1 = cycle_system(1);
  EXPECT_TRUE(is_eventually_dense(c1, ElementSeq{{}, {1}}));
}

TEST(DynSys, AtomicReductionMatchesPartitionDefinition) {
  for (std::size_t k = 1; k <= 4; ++k) {
    FiniteDynSys sys = cycle_system(k);
    for (Element a = 1; a <= sys.one(); ++a)
      for (Element b = 1; b <= sys.one(); ++b) {
        ElementSeq s{{}, {a, b}};
        ASSERT_EQ(is_eventually_small(sys, s), is_eventually_small_by_partitions(sys, s));
      }
  }
}

TEST(DynSys, ShiftCompatibleExamples) {
  FiniteDynSys c4 = cycle_system(4);
  EXPECT_TRUE(is_shift_compatible(c4, orbit_sequence(c4)));
  EXPECT_FALSE(is_shift_compatible(perm_system({1, 0}), ElementSeq{{}, {1}}));
  EXPECT_FALSE(is_shift_compatible(c4, ElementSeq{{2}, {1, 2, 4, 8}}));

  // a diligent schedule of the atom hitting digraph, read back as atoms
  FiniteDynSys c5 = cycle_system(5);
  Digraph hc = hitting_digraph(c5, atom_partition(c5));
  EpWalk sched = diligent_schedule(hc);
  ElementSeq seq;
  for (Vertex v : sched.period) seq.period.push_back(Element{1} << v);
  EXPECT_TRUE(is_shift_compatible(c5, seq));
}

TEST(DynSys, PrefixInducedMapExamples) {
  FiniteDynSys swap = perm_system({1, 0});
  ElementSeq s{{3}, {1, 2}};
  EXPECT_EQ(prefix_induced_map(s, 7, 0).size(), 0u);
  EXPECT_EQ(prefix_induced_map(s, 7, swap.one()).size(), 7u);
  // positions 1, 3, 5 carry t0
  EXPECT_EQ(prefix_induced_map(s, 7, 1), (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(prefix_induced_map(ElementSeq{{}, {1, 2}}, 6, 1), (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_TRUE(induced_tail_is_embedding(swap, s, 7));
  EXPECT_FALSE(induced_tail_is_embedding(swap, ElementSeq{{}, {1}}, 6));   // not dense
  EXPECT_FALSE(induced_tail_is_embedding(swap, ElementSeq{{}, {3, 1}}, 6));  // not small
}

TEST(DynSys, InducedTailIsEmbeddingExactlyForSmallDenseSequences) {
  for (std::size_t k = 1; k <= 3; ++k) {
    FiniteDynSys sys = cycle_system(k);
    const Element one = sys.one();
    std::vector<Element> period;
    auto grow = [&](auto& self, std::size_t len) -> void {
      if (period.size() == len) {
        ElementSeq s{{}, period};
        const bool expected = is_eventually_small(sys, s) && is_eventually_dense(sys, s);
        ASSERT_EQ(induced_tail_is_embedding(sys, s, 2 * len), expected);
        return;
      }
      for (Element x = 1; x <= one; ++x) {
        period.push_back(x);
        self(self, len);
        period.pop_back();
      }
    };
    for (std::size_t len = 1; len <= 4; ++len) grow(grow, len);
  }
}

TEST(DynSys, EventualClosenessExamples) {
  FiniteDynSys c3 = cycle_system(3);
  ElementSeq a{{}, {1, 2, 4}};
  EXPECT_TRUE(eventually_close(c3, a, a));
  EXPECT_TRUE(eventually_close(c3, a, ElementSeq{{7, 7}, {4, 1, 2}}));
  EXPECT_FALSE(eventually_close(c3, a, ElementSeq{{}, {2, 1, 4}}));
}

// Equal tail induced maps iff eventually close, over all pairs of sequences
// with period at most 3 and preamble at most 1 on three atoms.
TEST(DynSys, EventualClosenessMatchesInducedTails) {
  FiniteDynSys sys = cycle_system(3);
  std::vector<ElementSeq> seqs;
  for (std::size_t len = 1; len <= 3; ++len) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= 7;
    for (std::size_t code = 0; code < total; ++code) {
      ElementSeq s;
      for (std::size_t c = code, i = 0; i < len; ++i, c /= 7) s.period.push_back(static_cast<Element>(c % 7 + 1));
      seqs.push_back(s);
      s.preamble = {7};
      seqs.push_back(s);
    }
  }
  std::size_t close = 0;
  for (const auto& s1 : seqs)
    for (const auto& s2 : seqs) {
      const bool c = eventually_close(sys, s1, s2);
      ASSERT_EQ(c, same_induced_tail(sys, s1, s2));
      close += c;
    }
  EXPECT_GT(close, seqs.size());
}

TEST(DynSys, OrbitSequenceRealizesCycle) {
  for (std::size_t k = 1; k <= 6; ++k) {
    FiniteDynSys sys = cycle_system(k);
    ElementSeq s = orbit_sequence(sys);
    EXPECT_EQ(s.period.size(), k);
    EXPECT_TRUE(is_eventually_small(sys, s));
    EXPECT_TRUE(is_eventually_dense(sys, s));
    EXPECT_TRUE(is_shift_compatible(sys, s));
    EXPECT_TRUE(induced_tail_is_embedding(sys, s, 10 * k));
  }
}
