#include "nwn/ms.hpp"

#include <sstream>

namespace nwn {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::Overflow: return "Overflow";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NotEnabled: return "NotEnabled";
    case Errc::UnknownTransition: return "UnknownTransition";
    case Errc::ModeNotEnabled: return "ModeNotEnabled";
    case Errc::UnknownEvent: return "UnknownEvent";
    case Errc::UnknownObjectNet: return "UnknownObjectNet";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NotConservative: return "NotConservative";
    case Errc::InvalidSource: return "InvalidSource";
    case Errc::NotRnu: return "NotRnu";
    case Errc::OrderUnavailable: return "OrderUnavailable";
    case Errc::StepNotEnabled: return "StepNotEnabled";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::ResolutionError: return "ResolutionError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::Usage: return "Usage";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

Count checked_add(Count a, Count b) {
  std::uint64_t s = std::uint64_t(a) + b;
  if (s > kMaxCount) fail(Errc::Overflow, "count overflow");
  return Count(s);
}

Count checked_mul(Count a, Count b) {
  std::uint64_t s = std::uint64_t(a) * b;
  if (s > kMaxCount) fail(Errc::Overflow, "count overflow");
  return Count(s);
}

Count Vec::at(std::size_t i) const {
  if (i >= c_.size()) fail(Errc::IndexOutOfRange, "vector index " + std::to_string(i));
  return c_[i];
}

void Vec::set(std::size_t i, Count v) {
  if (i >= c_.size()) fail(Errc::IndexOutOfRange, "vector index " + std::to_string(i));
  c_[i] = v;
}

void Vec::inc(std::size_t i, Count by) {
  if (i >= c_.size()) fail(Errc::IndexOutOfRange, "vector index " + std::to_string(i));
  c_[i] = checked_add(c_[i], by);
}

bool Vec::is_zero() const {
  for (Count c : c_)
    if (c) return false;
  return true;
}

std::uint64_t Vec::total() const {
  std::uint64_t s = 0;
  for (Count c : c_) s += c;
  return s;
}

static void same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    fail(Errc::DomainMismatch,
         "vector dimensions " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
}

Vec delta(std::size_t p, std::size_t n) {
  if (p >= n) fail(Errc::IndexOutOfRange, "delta index " + std::to_string(p) + " >= " + std::to_string(n));
  Vec v(n);
  v.set(p, 1);
  return v;
}

Vec operator+(const Vec& a, const Vec& b) {
  same_dim(a, b);
  std::vector<Count> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(a[i], b[i]);
  return Vec(std::move(out));
}

Vec operator-(const Vec& a, const Vec& b) {
  same_dim(a, b);
  std::vector<Count> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] > b[i] ? a[i] - b[i] : 0;
  return Vec(std::move(out));
}

Vec scale(const Vec& a, Count k) {
  std::vector<Count> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_mul(a[i], k);
  return Vec(std::move(out));
}

bool leq(const Vec& a, const Vec& b) {
  same_dim(a, b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Vec project(const Vec& m, std::size_t p) {
  Vec out(m.size());
  out.set(p, m.at(p));
  return out;
}

std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  os << ']';
  return os.str();
}

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::size_t hash_vec(const Vec& v) {
  std::size_t h = v.size();
  for (Count c : v.data()) h = hash_combine(h, c);
  return h;
}

DomainTag domain_tag(std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h | (1ull << 63);
}

DomainTag join_tags(DomainTag a, DomainTag b) {
  if (a == kUntagged) return b;
  if (b == kUntagged || a == b) return a;
  fail(Errc::DomainMismatch, "multisets over different domains");
}

std::string to_string(const Multiset<std::string>& m) {
  if (m.tag() == kEmptyDomain) return "ε";
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, c] : m.entries())
    for (Count i = 0; i < c; ++i) {
      os << (first ? "" : ",") << k;
      first = false;
    }
  os << '}';
  return os.str();
}

bool left_perfect_matching(std::size_t n_left, std::size_t n_right,
                           const std::function<bool(std::size_t, std::size_t)>& edge) {
  if (n_left > n_right) return false;
  std::vector<std::vector<std::size_t>> adj(n_left);
  for (std::size_t i = 0; i < n_left; ++i)
    for (std::size_t j = 0; j < n_right; ++j)
      if (edge(i, j)) adj[i].push_back(j);
  std::vector<long> match_r(n_right, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (std::size_t v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_r[v] < 0 || augment(std::size_t(match_r[v]))) {
        match_r[v] = long(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < n_left; ++u) {
    if (adj[u].empty()) return false;
    seen.assign(n_right, 0);
    if (!augment(u)) return false;
  }
  return true;
}

bool tuple_embeds(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  return left_perfect_matching(a.size(), b.size(),
                               [&](std::size_t i, std::size_t j) { return leq(a[i], b[j]); });
}

}  // namespace nwn
