#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace latkit {

using Element = std::size_t;

/// Fixed-universe bitset over element indices. Universes up to 256 elements
/// live inline; larger ones spill to the heap.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe) : universe_(universe) {
    if (word_count() > kInlineWords) heap_.assign(word_count(), 0);
  }

  static ElementSet full(std::size_t universe) {
    ElementSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.insert(i);
    return s;
  }

  template <class Range>
  static ElementSet of(std::size_t universe, const Range& elements) {
    ElementSet s(universe);
    for (auto e : elements) s.insert(static_cast<Element>(e));
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(Element e) const noexcept {
    return (data()[e >> 6] >> (e & 63)) & 1u;
  }
  void insert(Element e) noexcept { data()[e >> 6] |= std::uint64_t{1} << (e & 63); }
  void erase(Element e) noexcept { data()[e >> 6] &= ~(std::uint64_t{1} << (e & 63)); }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (std::size_t w = 0; w < word_count(); ++w) n += std::popcount(data()[w]);
    return n;
  }
  bool empty() const noexcept {
    for (std::size_t w = 0; w < word_count(); ++w)
      if (data()[w]) return false;
    return true;
  }

  ElementSet& operator|=(const ElementSet& o) noexcept {
    for (std::size_t w = 0; w < word_count(); ++w) data()[w] |= o.data()[w];
    return *this;
  }
  ElementSet& operator&=(const ElementSet& o) noexcept {
    for (std::size_t w = 0; w < word_count(); ++w) data()[w] &= o.data()[w];
    return *this;
  }
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }

  bool intersects(const ElementSet& o) const noexcept {
    for (std::size_t w = 0; w < word_count(); ++w)
      if (data()[w] & o.data()[w]) return true;
    return false;
  }
  bool subset_of(const ElementSet& o) const noexcept {
    for (std::size_t w = 0; w < word_count(); ++w)
      if (data()[w] & ~o.data()[w]) return false;
    return true;
  }

  friend bool operator==(const ElementSet& a, const ElementSet& b) noexcept {
    if (a.universe_ != b.universe_) return false;
    for (std::size_t w = 0; w < a.word_count(); ++w)
      if (a.data()[w] != b.data()[w]) return false;
    return true;
  }

  /// Calls f(e) for each member in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < word_count(); ++w) {
      std::uint64_t bits = data()[w];
      while (bits) {
        int b = std::countr_zero(bits);
        f(static_cast<Element>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  std::vector<Element> to_vector() const {
    std::vector<Element> out;
    for_each([&](Element e) { out.push_back(e); });
    return out;
  }

  std::size_t hash() const noexcept {
    std::size_t h = universe_;
    for (std::size_t w = 0; w < word_count(); ++w)
      h ^= std::hash<std::uint64_t>{}(data()[w]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  static constexpr std::size_t kInlineWords = 4;

  std::size_t word_count() const noexcept { return (universe_ + 63) / 64; }
  std::uint64_t* data() noexcept { return heap_.empty() ? inline_.data() : heap_.data(); }
  const std::uint64_t* data() const noexcept {
    return heap_.empty() ? inline_.data() : heap_.data();
  }

  std::size_t universe_ = 0;
  std::array<std::uint64_t, kInlineWords> inline_{};
  std::vector<std::uint64_t> heap_;
};

}  // namespace latkit
