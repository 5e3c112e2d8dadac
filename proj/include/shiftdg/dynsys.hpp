#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "shiftdg/morphism.hpp"

namespace shiftdg {

/// Element of the finite Boolean algebra: a set of atoms.
using Element = std::uint32_t;
using Partition = std::vector<Element>;
using ElementSeq = EventuallyPeriodic<Element>;

inline constexpr std::size_t kMaxAtoms = 32;
inline constexpr std::size_t kMaxEnumeratedAtoms = 8;

/// Atoms plus a permutation; automorphisms of a finite Boolean algebra are
/// exactly the atom permutations.
struct FiniteDynSys {
  std::vector<std::string> atoms;
  std::vector<std::size_t> alpha;

  std::size_t size() const { return atoms.size(); }
  Element one() const { return size() == 32 ? ~Element{0} : (Element{1} << size()) - 1; }

  Element image(Element x) const {
    Element y = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if ((x >> i) & 1U) y |= Element{1} << alpha[i];
    return y;
  }

  friend bool operator==(const FiniteDynSys&, const FiniteDynSys&) = default;
};

inline void require_valid(const FiniteDynSys& sys) {
  if (sys.atoms.empty() || sys.atoms.size() > kMaxAtoms)
    fail(ErrorCode::Malformed, "need between 1 and 32 atoms");
  if (sys.alpha.size() != sys.size()) fail(ErrorCode::Malformed, "alpha is not total");
  std::vector<bool> hit(sys.size(), false);
  for (std::size_t a : sys.alpha) {
    if (a >= sys.size() || hit[a]) fail(ErrorCode::Malformed, "alpha is not a permutation");
    hit[a] = true;
  }
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = i + 1; j < sys.size(); ++j)
      if (sys.atoms[i] == sys.atoms[j]) fail(ErrorCode::Malformed, "duplicate atom label");
}

inline FiniteDynSys cycle_system(std::size_t k) {
  FiniteDynSys sys;
  for (std::size_t i = 0; i < k; ++i) {
    sys.atoms.push_back(std::to_string(i));
    sys.alpha.push_back((i + 1) % k);
  }
  return sys;
}

inline std::vector<std::vector<std::size_t>> orbits(const FiniteDynSys& sys) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(sys.size(), false);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit;
    for (std::size_t j = i; !seen[j]; j = sys.alpha[j]) {
      seen[j] = true;
      orbit.push_back(j);
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

/// No proper nonzero x with alpha(x) <= x, by trying every subset.
inline bool is_incompressible_brute(const FiniteDynSys& sys) {
  require_valid(sys);
  if (sys.size() > 20) fail(ErrorCode::BudgetExceeded, "too many atoms for subset search");
  for (Element x = 1; x < sys.one(); ++x)
    if ((sys.image(x) & ~x) == 0) return false;
  return true;
}

/// A union of orbits is invariant, so incompressible means one orbit.
inline bool is_incompressible_orbits(const FiniteDynSys& sys) {
  require_valid(sys);
  return orbits(sys).size() == 1;
}

inline bool is_incompressible(const FiniteDynSys& sys) {
  const bool by_orbits = is_incompressible_orbits(sys);
  if (sys.size() <= 20 && is_incompressible_brute(sys) != by_orbits)
    internal_bug("incompressibility criteria disagree");
  return by_orbits;
}

inline bool is_partition(const FiniteDynSys& sys, const Partition& P) {
  Element seen = 0;
  for (Element b : P) {
    if (b == 0 || (b & seen) || (b & ~sys.one())) return false;
    seen |= b;
  }
  return seen == sys.one();
}

inline void require_partition(const FiniteDynSys& sys, const Partition& P) {
  if (!is_partition(sys, P)) fail(ErrorCode::InvalidPartition);
}

inline std::string element_label(const FiniteDynSys& sys, Element x) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < sys.size(); ++i)
    if ((x >> i) & 1U) {
      if (!first) out += ",";
      out += sys.atoms[i];
      first = false;
    }
  return out + "}";
}

inline Partition atom_partition(const FiniteDynSys& sys) {
  Partition P;
  for (std::size_t i = 0; i < sys.size(); ++i) P.push_back(Element{1} << i);
  return P;
}

/// Blocks x, y with x -> y iff alpha(x) meets y.
inline Digraph hitting_digraph(const FiniteDynSys& sys, const Partition& P) {
  require_valid(sys);
  require_partition(sys, P);
  Digraph g;
  for (Element b : P) g.add_vertex(element_label(sys, b));
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Element img = sys.image(P[i]);
    for (std::size_t j = 0; j < P.size(); ++j)
      if (img & P[j]) g.add_edge(i, j);
  }
  return g;
}

/// Every block of fine lies inside a block of coarse.
inline bool refines(const Partition& fine, const Partition& coarse) {
  for (Element b : fine) {
    bool inside = false;
    for (Element c : coarse) inside = inside || (b & ~c) == 0;
    if (!inside) return false;
  }
  return true;
}

inline DigraphMap natural_partition_map(const Partition& fine, const Partition& coarse,
                                        const FiniteDynSys& sys) {
  if (!refines(fine, coarse)) fail(ErrorCode::NotARefinement);
  DigraphMap m{hitting_digraph(sys, fine), hitting_digraph(sys, coarse), {}};
  for (Element b : fine)
    for (std::size_t j = 0; j < coarse.size(); ++j)
      if ((b & ~coarse[j]) == 0) m.assignment.push_back(j);
  if (!is_epimorphism(m)) internal_bug("natural map is not an epimorphism");
  return m;
}

/// Blocks of the common refinement (nonzero meets), in lexicographic block order.
inline Partition common_refinement(const Partition& P, const Partition& Q) {
  Partition R;
  for (Element p : P)
    for (Element q : Q)
      if (p & q) R.push_back(p & q);
  return R;
}

/// a and b meet exactly the same blocks of P.
inline bool approx_under(Element a, Element b, const Partition& P) {
  for (Element u : P)
    if (((a & u) != 0) != ((b & u) != 0)) return false;
  return true;
}

/// Calls f on every partition of n atoms, via restricted growth strings.
template <class F>
void for_each_partition(std::size_t n, F f) {
  if (n == 0 || n > kMaxEnumeratedAtoms)
    fail(ErrorCode::BudgetExceeded, "partition enumeration supports 1 to 8 atoms");
  std::vector<std::size_t> rgs(n, 0), maxes(n, 0);
  for (;;) {
    std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    Partition P(blocks, 0);
    for (std::size_t i = 0; i < n; ++i) P[rgs[i]] |= Element{1} << i;
    f(P);
    // advance: rightmost position that can grow
    std::size_t i = n;
    while (i-- > 1) {
      if (rgs[i] <= maxes[i]) {
        ++rgs[i];
        for (std::size_t j = i + 1; j < n; ++j) {
          rgs[j] = 0;
          maxes[j] = std::max(maxes[j - 1], rgs[j - 1]);
        }
        break;
      }
    }
    if (i == 0) return;
  }
}

inline std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  for_each_partition(n, [&](const Partition& P) { out.push_back(P); });
  return out;
}

inline void require_nonzero_period(const ElementSeq& seq) {
  if (seq.period.empty()) fail(ErrorCode::Malformed, "empty period");
  for (Element x : seq.period)
    if (x == 0) fail(ErrorCode::ZeroEntry);
}

/// In a finite algebra, being below every partition means being an atom (or
/// zero), so eventually small means an atomic period.
inline bool is_eventually_small(const FiniteDynSys& sys, const ElementSeq& seq) {
  require_nonzero_period(seq);
  (void)sys;
  for (Element x : seq.period)
    if (std::popcount(x) != 1) return false;
  return true;
}

/// The defining statement: every period entry lies below some block of every partition.
inline bool is_eventually_small_by_partitions(const FiniteDynSys& sys, const ElementSeq& seq) {
  require_nonzero_period(seq);
  bool ok = true;
  for_each_partition(sys.size(), [&](const Partition& P) {
    for (Element x : seq.period) {
      bool below = false;
      for (Element u : P) below = below || (x & ~u) == 0;
      ok = ok && below;
    }
  });
  return ok;
}

inline bool is_eventually_dense(const FiniteDynSys& sys, const ElementSeq& seq) {
  require_nonzero_period(seq);
  for (std::size_t t = 0; t < sys.size(); ++t) {
    const Element atom = Element{1} << t;
    bool hit = false;
    for (Element x : seq.period) hit = hit || (x & ~atom) == 0;
    if (!hit) return false;
  }
  return true;
}

/// alpha(a_n) meets a_{n+1} for every n.
inline bool is_shift_compatible(const FiniteDynSys& sys, const ElementSeq& seq) {
  require_nonzero_period(seq);
  const std::size_t stop = seq.preamble.size() + seq.period.size();
  for (std::size_t n = 0; n < stop; ++n)
    if ((sys.image(seq.at(n)) & seq.at(n + 1)) == 0) return false;
  return true;
}

/// Indices n < N with seq(n) <= a.
inline std::vector<std::size_t> prefix_induced_map(const ElementSeq& seq, std::size_t N, Element a) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < N; ++n)
    if ((seq.at(n) & ~a) == 0) out.push_back(n);
  return out;
}

/// The map a -> {n in [|preamble|, N) : seq(n) <= a} is an injective Boolean
/// homomorphism, checked for every element and every pair.
inline bool induced_tail_is_embedding(const FiniteDynSys& sys, const ElementSeq& seq, std::size_t N) {
  require_valid(sys);
  if (sys.size() > 12) fail(ErrorCode::BudgetExceeded, "too many atoms for pairwise check");
  const std::size_t lo = seq.preamble.size();
  if (N <= lo) return false;
  const Element one = sys.one();
  std::vector<std::vector<bool>> img(std::size_t{one} + 1);
  for (Element a = 0; a <= one; ++a) {
    img[a].resize(N - lo);
    for (std::size_t n = lo; n < N; ++n) img[a][n - lo] = (seq.at(n) & ~a) == 0;
  }
  for (Element a = 0; a <= one; ++a) {
    for (std::size_t i = 0; i < N - lo; ++i)
      if (img[~a & one][i] == img[a][i]) return false;  // complement
    for (Element b = a + 1; b <= one; ++b) {
      if (img[a] == img[b]) return false;  // injective
      for (std::size_t i = 0; i < N - lo; ++i) {
        if (img[a | b][i] != (img[a][i] || img[b][i])) return false;
        if (img[a & b][i] != (img[a][i] && img[b][i])) return false;
      }
    }
  }
  return true;
}

/// approx_under holds termwise beyond both preambles for every partition.
inline bool eventually_close(const FiniteDynSys& sys, const ElementSeq& s1, const ElementSeq& s2) {
  require_valid(sys);
  auto [start, len] = common_window(s1, s2);
  bool ok = true;
  for_each_partition(sys.size(), [&](const Partition& P) {
    for (std::size_t n = start; n < start + len && ok; ++n) ok = approx_under(s1.at(n), s2.at(n), P);
  });
  return ok;
}

/// Induced maps of the two sequences agree beyond both preambles.
inline bool same_induced_tail(const FiniteDynSys& sys, const ElementSeq& s1, const ElementSeq& s2) {
  require_valid(sys);
  auto [start, len] = common_window(s1, s2);
  for (Element a = 0; a <= sys.one(); ++a)
    for (std::size_t n = start; n < start + len; ++n)
      if (((s1.at(n) & ~a) == 0) != ((s2.at(n) & ~a) == 0)) return false;
  return true;
}

/// The atom sequence following the orbit of atom 0.
inline ElementSeq orbit_sequence(const FiniteDynSys& sys) {
  ElementSeq seq;
  std::size_t t = 0;
  do {
    seq.period.push_back(Element{1} << t);
    t = sys.alpha[t];
  } while (t != 0);
  return seq;
}

}  // namespace shiftdg
