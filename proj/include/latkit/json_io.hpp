#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "latkit/error.hpp"
#include "latkit/jonsson.hpp"
#include "latkit/order.hpp"
#include "latkit/partial_lattice.hpp"
#include "latkit/partition.hpp"

namespace latkit {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline Element element_ref(const Poset& p, const json& j) {
  if (j.is_number_unsigned()) {
    auto e = j.get<Element>();
    if (e >= p.size()) throw Error(ErrorCode::ParseError, "element index " + std::to_string(e) + " out of range");
    return e;
  }
  if (!j.is_string()) throw Error(ErrorCode::ParseError, "element reference must be a name or an index");
  auto e = p.find(j.get<std::string>());
  if (!e) throw Error(ErrorCode::UnknownGenerator, "unknown element '" + j.get<std::string>() + "'");
  return *e;
}

/// Strict covering pairs of the order.
inline std::vector<std::pair<Element, Element>> covers(const Poset& p) {
  std::vector<std::pair<Element, Element>> out;
  for (Element x = 0; x < p.size(); ++x)
    for (Element y = 0; y < p.size(); ++y) {
      if (x == y || !p.leq(x, y)) continue;
      bool cover = true;
      for (Element z = 0; z < p.size() && cover; ++z)
        if (z != x && z != y && p.leq(x, z) && p.leq(z, y)) cover = false;
      if (cover) out.emplace_back(x, y);
    }
  return out;
}

}  // namespace detail

/// {"elements": [...], "order": [[x, y], ...], "covers": bool}. With
/// "covers" true (the default) the order is closed reflexively and
/// transitively.
inline Poset poset_from_json(const json& j) {
  std::vector<std::string> names = detail::field(j, "elements").get<std::vector<std::string>>();
  Poset names_only = Poset::from_relation(names, {}, true);
  std::vector<std::pair<Element, Element>> rel;
  if (j.contains("order"))
    for (const auto& pair : j.at("order")) {
      if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::ParseError, "order entries are [lower, upper] pairs");
      rel.emplace_back(detail::element_ref(names_only, pair[0]), detail::element_ref(names_only, pair[1]));
    }
  return Poset::from_relation(std::move(names), rel, j.value("covers", true));
}

inline json poset_to_json(const Poset& p) {
  json order = json::array();
  for (auto [x, y] : detail::covers(p)) order.push_back({p.name(x), p.name(y)});
  return json{{"elements", p.names()}, {"order", order}, {"covers", true}};
}

/// Built-in lattices: eqN (partitions of N points), chainN, m3, n5.
inline FiniteLattice named_lattice(const std::string& name) {
  auto suffix = [&](const std::string& prefix) -> std::optional<std::size_t> {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
    for (std::size_t i = prefix.size(); i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    return std::stoul(name.substr(prefix.size()));
  };
  if (name == "m3") return m3();
  if (name == "n5") return n5();
  if (auto n = suffix("eq")) return eq_lattice(*n);
  if (auto n = suffix("chain")) {
    if (*n == 0) throw Error(ErrorCode::InvalidArgument, "a chain needs at least one element");
    return chain(*n);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown lattice '" + name + "'");
}

/// A lattice given by name or as a poset object; "zero", if present, must
/// name the least element.
inline FiniteLattice lattice_from_json(const json& j) {
  if (j.is_string()) return named_lattice(j.get<std::string>());
  FiniteLattice l = check_lattice(poset_from_json(j));
  if (j.contains("zero") && l.name(l.zero()) != j.at("zero").get<std::string>())
    throw Error(ErrorCode::NotALattice, "declared zero '" + j.at("zero").get<std::string>() + "' is not the least element");
  return l;
}

inline json lattice_to_json(const FiniteLattice& l) {
  json j = poset_to_json(l.poset());
  j["zero"] = l.name(l.zero());
  return j;
}

/// A poset plus "joins"/"meets": [{"args": [...], "result": x}, ...], or
/// {"lattice": ...} for a lattice with every binary operation declared.
inline PartialLattice partial_lattice_from_json(const json& j) {
  if (j.is_string() || (j.is_object() && j.contains("lattice")))
    return PartialLattice::from_lattice(lattice_from_json(j.is_string() ? j : j.at("lattice")));
  PartialLattice pl(poset_from_json(j));
  auto read = [&](const char* key, bool join) {
    if (!j.contains(key)) return;
    for (const auto& d : j.at(key)) {
      std::vector<Element> args;
      for (const auto& a : detail::field(d, "args")) args.push_back(detail::element_ref(pl.poset(), a));
      Element r = detail::element_ref(pl.poset(), detail::field(d, "result"));
      if (join)
        pl.declare_join(std::move(args), r);
      else
        pl.declare_meet(std::move(args), r);
    }
  };
  read("joins", true);
  read("meets", false);
  pl.validate();
  return pl;
}

inline json partial_lattice_to_json(const PartialLattice& pl) {
  json j = poset_to_json(pl.poset());
  auto write = [&](const std::vector<Declaration>& decls) {
    json arr = json::array();
    for (const auto& d : decls) {
      json args = json::array();
      for (auto a : d.args) args.push_back(pl.name(a));
      arr.push_back({{"args", args}, {"result", pl.name(d.result)}});
    }
    return arr;
  };
  j["joins"] = write(pl.joins());
  j["meets"] = write(pl.meets());
  return j;
}

inline json partition_to_json(const Partition& p) { return json{{"carrier", p.carrier()}, {"blocks", p.blocks()}}; }

inline Partition partition_from_json(const json& j) {
  return Partition::from_blocks(detail::field(j, "carrier").get<std::vector<Point>>(),
                                detail::field(j, "blocks").get<std::vector<std::vector<Point>>>());
}

inline json compact_equiv_to_json(const CompactEquiv& e) {
  json pairs = json::array();
  for (auto [a, b] : e.pairs()) pairs.push_back({a, b});
  return json{{"pairs", pairs}};
}

inline CompactEquiv compact_equiv_from_json(const json& j) {
  return CompactEquiv::from_pairs(detail::field(j, "pairs").get<std::vector<std::pair<Point, Point>>>());
}

/// Points with their generation and the lower triangle of δ: row i lists
/// δ(i, 0), ..., δ(i, i-1) as indices into "values".
template <LatticeOracle O>
json delta_table_to_json(DeltaTable<O>& t) {
  json values = json::array();
  for (ValueId v = 0; v < t.values().size(); ++v) values.push_back(t.values().render(v));
  json generation = json::array(), delta = json::array();
  for (PointId x = 0; x < t.size(); ++x) {
    generation.push_back(t.generation(x));
    json row = json::array();
    for (PointId y = 0; y < x; ++y) row.push_back(t.delta(x, y));
    delta.push_back(row);
  }
  return json{{"points", t.size()}, {"values", values}, {"generation", generation}, {"delta", delta}};
}

/// Rebuilds a table over a finite lattice from delta_table_to_json output.
/// Obligation records are not serialized.
inline DeltaTable<FiniteLatticeOracle> delta_table_from_json(const json& j, const FiniteLattice& l) {
  DeltaTable<FiniteLatticeOracle> t(FiniteLatticeOracle{&l});
  std::vector<ValueId> ids;
  for (const auto& v : detail::field(j, "values")) {
    auto e = l.find(v.get<std::string>());
    if (!e) throw Error(ErrorCode::UnknownGenerator, "unknown lattice element '" + v.get<std::string>() + "'");
    ids.push_back(t.values().intern(*e));
  }
  const auto& delta = detail::field(j, "delta");
  const auto& gen = detail::field(j, "generation");
  if (gen.size() != delta.size()) throw Error(ErrorCode::ParseError, "generation and delta lengths differ");
  for (std::size_t x = 0; x < delta.size(); ++x) {
    if (delta[x].size() != x) throw Error(ErrorCode::ParseError, "row " + std::to_string(x) + " has wrong length");
    std::vector<ValueId> row;
    for (const auto& v : delta[x]) {
      auto k = v.get<std::size_t>();
      if (k >= ids.size()) throw Error(ErrorCode::ParseError, "value index out of range");
      row.push_back(ids[k]);
    }
    t.add_point(row, gen[x].get<std::size_t>());
  }
  return t;
}

}  // namespace latkit
