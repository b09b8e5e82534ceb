#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace opacsyn {

/// Fixed-capacity state set. Plants are interned to dense indices, so a
/// 256-bit mask covers every model this toolkit is meant for; larger inputs
/// are rejected at parse time.
struct StateSet {
  static constexpr int kCapacity = 256;
  static constexpr int kWords = kCapacity / 64;

  std::array<std::uint64_t, kWords> w{};

  constexpr StateSet() = default;
  StateSet(std::initializer_list<int> bits) {
    for (int b : bits) set(b);
  }

  static StateSet single(int bit) {
    StateSet s;
    s.set(bit);
    return s;
  }

  void set(int bit) { w[bit >> 6] |= (std::uint64_t{1} << (bit & 63)); }
  void reset(int bit) { w[bit >> 6] &= ~(std::uint64_t{1} << (bit & 63)); }
  bool test(int bit) const {
    return (w[bit >> 6] >> (bit & 63)) & 1u;
  }

  bool empty() const {
    for (auto x : w)
      if (x) return false;
    return true;
  }

  int count() const {
    int n = 0;
    for (auto x : w) n += __builtin_popcountll(x);
    return n;
  }

  bool subset_of(const StateSet& o) const {
    for (int i = 0; i < kWords; ++i)
      if (w[i] & ~o.w[i]) return false;
    return true;
  }

  bool intersects(const StateSet& o) const {
    for (int i = 0; i < kWords; ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }

  StateSet operator|(const StateSet& o) const {
    StateSet r;
    for (int i = 0; i < kWords; ++i) r.w[i] = w[i] | o.w[i];
    return r;
  }
  StateSet operator&(const StateSet& o) const {
    StateSet r;
    for (int i = 0; i < kWords; ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
  StateSet minus(const StateSet& o) const {
    StateSet r;
    for (int i = 0; i < kWords; ++i) r.w[i] = w[i] & ~o.w[i];
    return r;
  }
  StateSet& operator|=(const StateSet& o) {
    for (int i = 0; i < kWords; ++i) w[i] |= o.w[i];
    return *this;
  }
  StateSet& operator&=(const StateSet& o) {
    for (int i = 0; i < kWords; ++i) w[i] &= o.w[i];
    return *this;
  }

  bool operator==(const StateSet&) const = default;
  auto operator<=>(const StateSet&) const = default;

  /// Calls fn(bit) for every set bit in ascending order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int i = 0; i < kWords; ++i) {
      std::uint64_t x = w[i];
      while (x) {
        int b = __builtin_ctzll(x);
        fn(i * 64 + b);
        x &= x - 1;
      }
    }
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto x : w) {
      h ^= x;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

/// Event sets are plain 64-bit masks; models with more than 64 event labels
/// are rejected at parse time.
using EventSet = std::uint64_t;

constexpr EventSet event_bit(int e) { return EventSet{1} << e; }

template <typename Fn>
void for_each_event(EventSet s, Fn&& fn) {
  while (s) {
    int b = __builtin_ctzll(s);
    fn(b);
    s &= s - 1;
  }
}

inline std::size_t hash_combine(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

}  // namespace opacsyn
