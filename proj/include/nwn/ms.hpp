#pragma once

// Multisets, dense count vectors and the orders over them.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nwn/error.hpp"

namespace nwn {

using Count = std::uint32_t;
inline constexpr std::uint64_t kMaxCount = 0xFFFFFFFFull;

Count checked_add(Count a, Count b);
Count checked_mul(Count a, Count b);

// Dense non-negative vector indexed by an ordered place set.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n) : c_(n, 0) {}
  Vec(std::initializer_list<Count> init) : c_(init) {}
  explicit Vec(std::vector<Count> v) : c_(std::move(v)) {}

  std::size_t size() const { return c_.size(); }
  Count operator[](std::size_t i) const { return c_[i]; }
  Count at(std::size_t i) const;
  void set(std::size_t i, Count v);
  void inc(std::size_t i, Count by = 1);
  void resize(std::size_t n) { c_.resize(n, 0); }

  bool is_zero() const;
  std::uint64_t total() const;
  const std::vector<Count>& data() const { return c_; }

  friend bool operator==(const Vec&, const Vec&) = default;
  friend auto operator<=>(const Vec&, const Vec&) = default;

 private:
  std::vector<Count> c_;
};

Vec delta(std::size_t p, std::size_t n);
Vec operator+(const Vec& a, const Vec& b);
// Truncated pointwise difference.
Vec operator-(const Vec& a, const Vec& b);
Vec scale(const Vec& a, Count k);
bool leq(const Vec& a, const Vec& b);
// m(p) * delta_p
Vec project(const Vec& m, std::size_t p);
std::string to_string(const Vec& v);

std::size_t hash_combine(std::size_t seed, std::size_t v);
std::size_t hash_vec(const Vec& v);

struct VecHash {
  std::size_t operator()(const Vec& v) const { return hash_vec(v); }
};

// Domain tags catch cross-domain mixing. Tag 0 is untagged and mixes with
// anything; kEmptyDomain marks the empty domain, displayed as epsilon.
using DomainTag = std::uint64_t;
inline constexpr DomainTag kUntagged = 0;
inline constexpr DomainTag kEmptyDomain = 1;
DomainTag domain_tag(std::string_view name);
DomainTag join_tags(DomainTag a, DomainTag b);

template <class T>
class Multiset {
 public:
  Multiset() = default;
  explicit Multiset(DomainTag tag) : tag_(tag) {}
  Multiset(std::initializer_list<T> elems, DomainTag tag = kUntagged) : tag_(tag) {
    for (const auto& e : elems) add(e);
  }

  static Multiset epsilon() { return Multiset(kEmptyDomain); }

  Multiset& add(const T& x, Count n = 1) {
    if (n == 0) return *this;
    if (tag_ == kEmptyDomain) fail(Errc::DomainMismatch, "element added to the empty domain");
    auto& c = m_[x];
    c = checked_add(c, n);
    return *this;
  }
  Count count(const T& x) const {
    auto it = m_.find(x);
    return it == m_.end() ? 0 : it->second;
  }
  std::uint64_t size() const {
    std::uint64_t s = 0;
    for (const auto& [k, c] : m_) s += c;
    return s;
  }
  bool empty() const { return m_.empty(); }
  std::vector<T> support() const {
    std::vector<T> out;
    for (const auto& [k, c] : m_) out.push_back(k);
    return out;
  }
  const std::map<T, Count>& entries() const { return m_; }
  DomainTag tag() const { return tag_; }

  friend bool operator==(const Multiset& a, const Multiset& b) { return a.m_ == b.m_; }

 private:
  template <class U>
  friend Multiset<U> ms_combine_impl(const Multiset<U>&, const Multiset<U>&, bool);
  DomainTag tag_ = kUntagged;
  std::map<T, Count> m_;
};

enum class MsOp { Add, Sub };

template <class T>
Multiset<T> ms_combine_impl(const Multiset<T>& a, const Multiset<T>& b, bool add) {
  Multiset<T> out(join_tags(a.tag(), b.tag()));
  if (add) {
    out.m_ = a.m_;
    for (const auto& [k, c] : b.m_) {
      auto& slot = out.m_[k];
      slot = checked_add(slot, c);
    }
  } else {
    for (const auto& [k, c] : a.m_) {
      Count d = b.count(k);
      if (c > d) out.m_[k] = c - d;
    }
  }
  return out;
}

template <class T>
Multiset<T> ms_combine(const Multiset<T>& a, const Multiset<T>& b, MsOp op) {
  return ms_combine_impl(a, b, op == MsOp::Add);
}

template <class T>
bool ms_leq(const Multiset<T>& a, const Multiset<T>& b) {
  join_tags(a.tag(), b.tag());
  for (const auto& [k, c] : a.entries())
    if (c > b.count(k)) return false;
  return true;
}

std::string to_string(const Multiset<std::string>& m);

// True iff every left vertex can be matched to a distinct right vertex.
bool left_perfect_matching(std::size_t n_left, std::size_t n_right,
                           const std::function<bool(std::size_t, std::size_t)>& edge);

// Multiset embedding of vectors: each tuple of a maps injectively to a
// pointwise larger tuple of b.
bool tuple_embeds(const std::vector<Vec>& a, const std::vector<Vec>& b);

}  // namespace nwn
