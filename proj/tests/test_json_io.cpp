#include <gtest/gtest.h>

#include "latkit/json_io.hpp"

using namespace latkit;
using nlohmann::json;

namespace {

ObligationPolicy capped(std::size_t max_points) {
  ObligationPolicy p;
  p.max_points = max_points;
  return p;
}

}  // namespace

TEST(Json, PosetRoundTrip) {
  Poset p = n5().poset();
  EXPECT_EQ(poset_from_json(poset_to_json(p)), p);
}

TEST(Json, LatticeFromNameOrObject) {
  EXPECT_EQ(lattice_from_json("m3"), m3());
  EXPECT_EQ(lattice_from_json("chain4").size(), 4u);
  EXPECT_EQ(lattice_from_json("eq3").size(), 5u);
  EXPECT_EQ(lattice_from_json(lattice_to_json(n5())), n5());
  EXPECT_THROW(lattice_from_json("chain0"), Error);
  EXPECT_THROW(lattice_from_json("cube"), Error);
  json bad_zero = lattice_to_json(chain(2));
  bad_zero["zero"] = "1";
  EXPECT_THROW(lattice_from_json(bad_zero), Error);
}

TEST(Json, PartialLatticeRoundTrip) {
  json j = json::parse(R"({"elements": ["x", "y", "u"], "order": [["x", "u"], ["y", "u"]],
                           "joins": [{"args": ["x", "y"], "result": "u"}]})");
  PartialLattice pl = partial_lattice_from_json(j);
  EXPECT_EQ(pl.joins().size(), 1u);
  PartialLattice again = partial_lattice_from_json(partial_lattice_to_json(pl));
  EXPECT_EQ(again.poset(), pl.poset());
  EXPECT_EQ(again.joins(), pl.joins());
  EXPECT_EQ(partial_lattice_from_json(json{{"lattice", "m3"}}).joins().size(), 10u);
}

TEST(Json, Errors) {
  auto code = [](const json& j) {
    try {
      partial_lattice_from_json(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code(json{{"order", json::array()}}), ErrorCode::ParseError);
  EXPECT_EQ(code(json::parse(R"({"elements": ["x"], "order": [["x", "w"]]})")), ErrorCode::UnknownGenerator);
  EXPECT_EQ(code(json::parse(R"({"elements": ["x"], "order": [[0, 4]]})")), ErrorCode::ParseError);
  EXPECT_EQ(code(json::parse(R"({"elements": ["x", "y"], "joins": [{"args": ["x", "y"], "result": "x"}]})")),
            ErrorCode::BadDeclaration);
}

TEST(Json, PartitionsAndCompactEquivs) {
  Partition p = Partition::from_blocks({1, 2, 3}, {{1, 3}, {2}});
  EXPECT_EQ(partition_from_json(partition_to_json(p)), p);
  CompactEquiv e = CompactEquiv::from_pairs({{1, 4}, {4, 6}});
  CompactEquiv back = compact_equiv_from_json(compact_equiv_to_json(e));
  EXPECT_TRUE(back.leq(e));
  EXPECT_TRUE(e.leq(back));
}

TEST(Json, DeltaTableRoundTrip) {
  FiniteLattice eq3 = eq_lattice(3);
  std::vector<Element> all{0, 1, 2, 3, 4};
  auto t = JonssonBuilder<FiniteLatticeOracle>::seed(FiniteLatticeOracle{&eq3}, all);
  JonssonBuilder<FiniteLatticeOracle>::close(t, 1, capped(64));
  json j = delta_table_to_json(t);
  auto back = delta_table_from_json(j, eq3);
  ASSERT_EQ(back.size(), t.size());
  for (PointId x = 0; x < t.size(); ++x)
    for (PointId y = 0; y < t.size(); ++y) {
      EXPECT_EQ(back.values().value(back.delta(x, y)), t.values().value(t.delta(x, y)));
      EXPECT_EQ(back.generation(x), t.generation(x));
    }
  EXPECT_TRUE(back.verify_metric().empty());
  j["delta"][1] = json::array();
  EXPECT_THROW(delta_table_from_json(j, eq3), Error);
}
