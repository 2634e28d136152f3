#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latkit/element_set.hpp"
#include "latkit/error.hpp"

namespace latkit {

enum class TermKind : std::uint8_t { Generator, Join, Meet };

/// Handle to a hash-consed term inside a TermStore.
struct TermId {
  std::uint32_t value = 0;
  friend auto operator<=>(TermId, TermId) = default;
};

/// Interning arena for binary lattice terms over generator indices.
///
/// Structurally equal terms share one id. Join and Meet nodes store their
/// children in a canonical order (by structural hash, ties broken
/// structurally), so x∨y and y∨x are the same term.
class TermStore {
 public:
  TermId generator(Element g) { return intern(Node{TermKind::Generator, static_cast<std::uint32_t>(g), 0, 0, 1, 0, 0}); }
  TermId join(TermId a, TermId b) { return binary(TermKind::Join, a, b); }
  TermId meet(TermId a, TermId b) { return binary(TermKind::Meet, a, b); }
  TermId make(TermKind k, TermId a, TermId b) { return binary(k, a, b); }

  TermKind kind(TermId t) const { return nodes_[t.value].kind; }
  bool is_generator(TermId t) const { return kind(t) == TermKind::Generator; }
  Element generator_of(TermId t) const { return nodes_[t.value].a; }
  TermId lhs(TermId t) const { return TermId{nodes_[t.value].a}; }
  TermId rhs(TermId t) const { return TermId{nodes_[t.value].b}; }
  std::uint64_t hash(TermId t) const { return nodes_[t.value].hash; }
  std::size_t size(TermId t) const { return nodes_[t.value].size; }
  std::size_t depth(TermId t) const { return nodes_[t.value].depth; }

  /// Number of interned terms; ids are 0..count()-1.
  std::size_t count() const noexcept { return nodes_.size(); }

  /// Drops every term with id >= mark. Callers holding caches indexed by
  /// term id must truncate them as well.
  void rollback(std::size_t mark) {
    while (nodes_.size() > mark) {
      index_.erase(nodes_.back());
      nodes_.pop_back();
    }
  }

  /// Replaces every generator g of `pattern` by `substitution[g]`.
  TermId substitute(TermId pattern, const std::vector<TermId>& substitution) {
    if (is_generator(pattern)) {
      Element g = generator_of(pattern);
      if (g >= substitution.size()) throw Error(ErrorCode::ShapeMismatch, "no substitution for variable " + std::to_string(g));
      return substitution[g];
    }
    TermId l = substitute(lhs(pattern), substitution);
    TermId r = substitute(rhs(pattern), substitution);
    return make(kind(pattern), l, r);
  }

  /// Copies t from another store, replacing generator g by `substitution[g]`.
  TermId import(const TermStore& from, TermId t, const std::vector<TermId>& substitution) {
    if (from.is_generator(t)) {
      Element g = from.generator_of(t);
      if (g >= substitution.size()) throw Error(ErrorCode::ShapeMismatch, "no substitution for variable " + std::to_string(g));
      return substitution[g];
    }
    TermId l = import(from, from.lhs(t), substitution);
    TermId r = import(from, from.rhs(t), substitution);
    return make(from.kind(t), l, r);
  }

  /// Generators occurring in t.
  std::vector<Element> generators_in(TermId t) const {
    std::vector<Element> out;
    collect(t, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Renders t as an S-expression using `name` for generators.
  std::string to_sexpr(TermId t, const std::function<std::string(Element)>& name) const {
    if (is_generator(t)) return name(generator_of(t));
    return std::string("(") + (kind(t) == TermKind::Join ? "join " : "meet ") + to_sexpr(lhs(t), name) + " " +
           to_sexpr(rhs(t), name) + ")";
  }

  /// Structural three-way comparison; consistent with term equality.
  std::strong_ordering compare(TermId a, TermId b) const {
    if (a == b) return std::strong_ordering::equal;
    const Node& x = nodes_[a.value];
    const Node& y = nodes_[b.value];
    if (x.hash != y.hash) return x.hash <=> y.hash;
    if (x.kind != y.kind) return x.kind <=> y.kind;
    if (x.kind == TermKind::Generator) return x.a <=> y.a;
    if (auto c = compare(TermId{x.a}, TermId{y.a}); c != 0) return c;
    return compare(TermId{x.b}, TermId{y.b});
  }

 private:
  struct Node {
    TermKind kind;
    std::uint32_t a;
    std::uint32_t b;
    std::uint64_t hash;
    std::uint32_t size;
    std::uint32_t depth;
    std::uint32_t pad;

    friend bool operator==(const Node& x, const Node& y) { return x.kind == y.kind && x.a == y.a && x.b == y.b; }
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const noexcept {
      return (static_cast<std::size_t>(n.a) * 0x9e3779b97f4a7c15ULL) ^ (static_cast<std::size_t>(n.b) << 21) ^
             static_cast<std::size_t>(n.kind);
    }
  };

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  }

  TermId binary(TermKind k, TermId a, TermId b) {
    if (a.value >= nodes_.size() || b.value >= nodes_.size())
      throw Error(ErrorCode::InvalidArgument, "term id out of range");
    if (compare(a, b) > 0) std::swap(a, b);
    const Node& x = nodes_[a.value];
    const Node& y = nodes_[b.value];
    Node n{k, a.value, b.value, 0, x.size + y.size + 1, std::max(x.depth, y.depth) + 1, 0};
    n.hash = mix(mix(static_cast<std::uint64_t>(k) + 0x51ed27) ^ x.hash) + mix(y.hash ^ 0x2545F4914F6CDD1DULL);
    return intern(n);
  }

  TermId intern(Node n) {
    if (n.kind == TermKind::Generator) n.hash = mix(n.a + 0x1234567ULL);
    auto [it, inserted] = index_.try_emplace(n, static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) nodes_.push_back(n);
    return TermId{it->second};
  }

  void collect(TermId t, std::vector<Element>& out) const {
    if (is_generator(t)) {
      out.push_back(generator_of(t));
      return;
    }
    collect(lhs(t), out);
    collect(rhs(t), out);
  }

  std::vector<Node> nodes_;
  std::unordered_map<Node, std::uint32_t, NodeHash> index_;
};

/// Parses `(join x (meet y z))`. Join and meet accept two or more operands,
/// folded left. Atoms are resolved through `lookup`.
class SexprParser {
 public:
  SexprParser(std::string_view text, TermStore& store,
              std::function<std::optional<Element>(const std::string&)> lookup)
      : text_(text), store_(store), lookup_(std::move(lookup)) {}

  TermId parse() {
    skip_space();
    TermId t = parse_term();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  TermId parse_term() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '(') {
      ++pos_;
      skip_space();
      std::string op = atom();
      TermKind kind;
      if (op == "join" || op == "or" || op == "v")
        kind = TermKind::Join;
      else if (op == "meet" || op == "and" || op == "^")
        kind = TermKind::Meet;
      else
        fail("unknown operator '" + op + "'");
      std::vector<TermId> args;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) fail("unclosed '('");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        args.push_back(parse_term());
      }
      if (args.size() < 2) fail("operator needs at least two operands");
      TermId acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = store_.make(kind, acc, args[i]);
      return acc;
    }
    if (text_[pos_] == ')') fail("unexpected ')'");
    std::size_t start = pos_;
    std::string name = atom();
    auto e = lookup_(name);
    if (!e) {
      pos_ = start;
      fail("unknown generator '" + name + "'");
    }
    return store_.generator(*e);
  }

  std::string atom() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected an atom");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }

  std::string_view text_;
  TermStore& store_;
  std::function<std::optional<Element>(const std::string&)> lookup_;
  std::size_t pos_ = 0;
};

inline TermId parse_sexpr(std::string_view text, TermStore& store,
                          std::function<std::optional<Element>(const std::string&)> lookup) {
  return SexprParser(text, store, std::move(lookup)).parse();
}

}  // namespace latkit
