#include <gtest/gtest.h>

#include <map>
#include <random>

#include "latkit/partition.hpp"
#include "oracles/brute.hpp"

using namespace latkit;

namespace {

using Rel = std::vector<std::vector<bool>>;

Rel relation_of(const Partition& p) {
  const auto& c = p.carrier();
  Rel r(c.size(), std::vector<bool>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) r[i][j] = p.related(c[i], c[j]);
  return r;
}

Rel transitive_closure(Rel r) {
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace

TEST(Partition, FromBlocksValidates) {
  EXPECT_THROW(Partition::from_blocks({1, 2, 3}, {{1, 2}}), Error);
  EXPECT_THROW(Partition::from_blocks({1, 2}, {{1, 2}, {2}}), Error);
  EXPECT_THROW(Partition::from_blocks({1, 2}, {{1, 2}, {}}), Error);
  Partition p = Partition::from_blocks({3, 1, 2}, {{2, 1}, {3}});
  EXPECT_EQ(p.to_string(), "{{1,2},{3}}");
}

TEST(Partition, CarrierMismatch) {
  Partition a = Partition::discrete({1, 2});
  Partition b = Partition::discrete({1, 3});
  try {
    a.join(b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CarrierMismatch);
  }
}

TEST(Partition, JoinAndMeetAgainstRelations) {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto parts = enumerate_partitions(n);
    for (const auto& a : parts)
      for (const auto& b : parts) {
        Rel ra = relation_of(a), rb = relation_of(b);
        Rel uni = ra, inter = ra;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            uni[i][j] = ra[i][j] || rb[i][j];
            inter[i][j] = ra[i][j] && rb[i][j];
          }
        EXPECT_EQ(relation_of(a.join(b)), transitive_closure(uni));
        EXPECT_EQ(relation_of(a.meet(b)), inter);
        bool contained = true;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) contained = contained && (!ra[i][j] || rb[i][j]);
        EXPECT_EQ(a.leq(b), contained);
      }
  }
}

TEST(Partition, CountsAreBellNumbers) {
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(enumerate_partitions(n).size(), oracle::bell(n)) << n;
}

TEST(EqLattice, Shape) {
  FiniteLattice eq3 = eq_lattice(3);
  EXPECT_EQ(eq3.size(), 5u);
  EXPECT_EQ(eq3.name(eq3.zero()), "{{1},{2},{3}}");
  EXPECT_EQ(eq3.name(eq3.one()), "{{1,2,3}}");
  EXPECT_EQ(eq_lattice(4).size(), 15u);
  // Eq(3) is M3.
  EXPECT_TRUE(oracle::isomorphic(oracle::matrix_of(eq3.poset()), oracle::matrix_of(m3().poset())));
  EXPECT_THROW(eq_lattice(6), Error);
}

TEST(EqLattice, OperationsAgreeWithPartitions) {
  auto parts = enumerate_partitions(4);
  FiniteLattice l = eq_lattice(4);
  for (Element i = 0; i < l.size(); ++i)
    for (Element j = 0; j < l.size(); ++j) {
      EXPECT_EQ(parts[l.join(i, j)], parts[i].join(parts[j]));
      EXPECT_EQ(parts[l.meet(i, j)], parts[i].meet(parts[j]));
    }
}

TEST(CompactEquiv, ClosesTransitively) {
  CompactEquiv e = CompactEquiv::from_pairs({{1, 2}, {2, 5}});
  EXPECT_TRUE(e.related(1, 5));
  EXPECT_FALSE(e.related(1, 3));
  EXPECT_TRUE(e.related(7, 7));
  EXPECT_EQ(e.blocks(), (std::vector<std::vector<Point>>{{1, 2, 5}}));
}

TEST(CompactEquiv, LatticeOperations) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Point> pt(0, 6);
  for (int round = 0; round < 200; ++round) {
    std::vector<std::pair<Point, Point>> pa, pb;
    for (int k = 0; k < 3; ++k) {
      pa.emplace_back(pt(rng), pt(rng));
      pb.emplace_back(pt(rng), pt(rng));
    }
    CompactEquiv a = CompactEquiv::from_pairs(pa), b = CompactEquiv::from_pairs(pb);
    std::vector<Point> carrier{0, 1, 2, 3, 4, 5, 6};
    Partition qa = Partition::generated_by(carrier, pa), qb = Partition::generated_by(carrier, pb);
    for (Point x = 0; x < 7; ++x)
      for (Point y = 0; y < 7; ++y) {
        EXPECT_EQ(a.join(b).related(x, y), qa.join(qb).related(x, y));
        EXPECT_EQ(a.meet(b).related(x, y), qa.meet(qb).related(x, y));
      }
    EXPECT_EQ(a.leq(b), qa.leq(qb));
    EXPECT_TRUE(a.meet(b).leq(a));
    EXPECT_TRUE(a.leq(a.join(b)));
  }
}

TEST(Retraction, LiftsPartition) {
  Partition theta = Partition::from_blocks({0, 1, 2}, {{0, 1}, {2}});
  std::map<Point, Point> rho{{0, 0}, {1, 1}, {2, 2}, {3, 0}, {4, 2}};
  Partition big = lift_via_retraction(theta, rho);
  EXPECT_EQ(big.to_string(), "{{0,1,3},{2,4}}");
  rho[1] = 0;
  EXPECT_THROW(lift_via_retraction(theta, rho), Error);
  std::map<Point, Point> outside{{0, 0}, {1, 1}, {2, 2}, {3, 9}};
  EXPECT_THROW(lift_via_retraction(theta, outside), Error);
}

TEST(Retraction, PreservesOperations) {
  auto parts = enumerate_partitions(3);
  std::vector<Point> small{1, 2, 3};
  std::map<Point, Point> rho{{1, 1}, {2, 2}, {3, 3}, {4, 1}, {5, 3}};
  for (auto a : parts)
    for (auto b : parts) {
      EXPECT_EQ(lift_via_retraction(a.join(b), rho), lift_via_retraction(a, rho).join(lift_via_retraction(b, rho)));
      EXPECT_EQ(lift_via_retraction(a.meet(b), rho), lift_via_retraction(a, rho).meet(lift_via_retraction(b, rho)));
    }
}
