#include <gtest/gtest.h>

#include "latkit/order.hpp"
#include "oracles/brute.hpp"

using namespace latkit;

TEST(Poset, RejectsCycle) {
  EXPECT_THROW(Poset::from_relation({"x", "y"}, {{0, 1}, {1, 0}}, true), Error);
  try {
    Poset::from_relation({"x", "y"}, {{0, 1}, {1, 0}}, true);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAPoset);
  }
}

TEST(Poset, RejectsNonTransitiveMatrix) {
  std::vector<std::vector<char>> m{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}};
  EXPECT_THROW(Poset::from_matrix({"x", "y", "z"}, m), Error);
}

TEST(Poset, CoversAreClosed) {
  Poset p = Poset::from_relation({"x", "y", "z"}, {{0, 1}, {1, 2}}, true);
  EXPECT_TRUE(p.leq(0, 2));
  EXPECT_FALSE(p.leq(2, 0));
  EXPECT_EQ(p.down(2).count(), 3u);
  EXPECT_EQ(p.up(0).count(), 3u);
}

TEST(FiniteLattice, AntichainOfTwoIsNotALattice) {
  Poset p = Poset::from_relation({"x", "y"}, {}, true);
  try {
    check_lattice(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotALattice);
  }
}

TEST(FiniteLattice, M3Operations) {
  FiniteLattice l = m3();
  Element a = *l.find("a"), b = *l.find("b"), c = *l.find("c");
  EXPECT_EQ(l.join(a, b), l.one());
  EXPECT_EQ(l.meet(a, b), l.zero());
  // Not distributive.
  EXPECT_NE(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
}

TEST(FiniteLattice, N5IsModularFailure) {
  FiniteLattice l = n5();
  Element a = *l.find("a"), b = *l.find("b"), c = *l.find("c");
  // a <= b but a ∨ (c ∧ b) != (a ∨ c) ∧ b.
  EXPECT_TRUE(l.leq(a, b));
  EXPECT_NE(l.join(a, l.meet(c, b)), l.meet(l.join(a, c), b));
}

TEST(FiniteLattice, LatticeLawsOnEnumeratedLattices) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& l : enumerate_lattices(n))
      for (Element x = 0; x < l.size(); ++x)
        for (Element y = 0; y < l.size(); ++y) {
          EXPECT_EQ(l.join(x, y), l.join(y, x));
          EXPECT_EQ(l.join(x, l.meet(x, y)), x);
          EXPECT_EQ(l.meet(x, l.join(x, y)), x);
          EXPECT_EQ(l.leq(x, y), l.join(x, y) == y);
          for (Element z = 0; z < l.size(); ++z) EXPECT_EQ(l.join(l.join(x, y), z), l.join(x, l.join(y, z)));
        }
}

TEST(Enumeration, CountsMatchBruteForce) {
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(enumerate_lattices(n).size(), oracle::count_lattices(n)) << n;
}

TEST(Enumeration, SevenElements) { EXPECT_EQ(enumerate_lattices(7).size(), 53u); }

TEST(Enumeration, PairwiseNonIsomorphic) {
  auto ls = enumerate_lattices(6);
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j)
      EXPECT_FALSE(oracle::isomorphic(oracle::matrix_of(ls[i].poset()), oracle::matrix_of(ls[j].poset())));
}

TEST(Enumeration, BoundEnforced) {
  try {
    enumerate_lattices(8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundExceeded);
  }
}

TEST(Enumeration, Deterministic) { EXPECT_EQ(enumerate_lattices(5), enumerate_lattices(5)); }

TEST(Dualize, InvolutionAndAntiIsomorphism) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& l : enumerate_lattices(n)) {
      FiniteLattice d = dualize(l);
      EXPECT_EQ(dualize(d), l);
      for (Element x = 0; x < l.size(); ++x)
        for (Element y = 0; y < l.size(); ++y) {
          EXPECT_EQ(l.leq(x, y), d.leq(y, x));
          EXPECT_EQ(l.join(x, y), d.meet(x, y));
        }
      EXPECT_EQ(d.zero(), l.one());
    }
}

TEST(AdjoinZero, NewBottom) {
  FiniteLattice l = adjoin_zero(chain(2));
  EXPECT_EQ(l.size(), 3u);
  EXPECT_EQ(l.zero(), 2u);
  EXPECT_EQ(l.name(l.zero()), "bot");
  EXPECT_TRUE(l.leq(2, 0));
}

TEST(Sublattice, RejectsNonClosedSubset) {
  FiniteLattice l = m3();
  EXPECT_THROW(sublattice(l, {*l.find("a"), *l.find("b")}), Error);
  FiniteLattice s = sublattice(l, {l.zero(), *l.find("a"), l.one()});
  EXPECT_EQ(s.size(), 3u);
}

TEST(Rename, KeepsOrder) {
  FiniteLattice l = rename(n5(), "x.");
  EXPECT_EQ(l.name(l.zero()), "0");
  EXPECT_TRUE(l.find("x.a").has_value());
  EXPECT_TRUE(l.leq(*l.find("x.a"), *l.find("x.b")));
}

TEST(CanonicalCode, InvariantUnderRelabelling) {
  Poset p = Poset::from_relation({"0", "a", "b", "1"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, true);
  Poset q = Poset::from_relation({"0", "b", "a", "1"}, {{0, 2}, {0, 1}, {2, 3}, {1, 3}}, true);
  EXPECT_EQ(canonical_code(p, true), canonical_code(q, true));
}
