#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bitoss/error.hpp"
#include "bitoss/numeric.hpp"
#include "bitoss/point.hpp"

namespace bitoss {

/// Cap on the number of multisets `enumerate_msets` will materialise.
/// Defaults to 10^7; the BITOSS_MSET_CAP environment variable overrides it.
std::uint64_t enumeration_cap();

/// Finitely supported map from points to positive multiplicities.
template <class P>
class Multiset {
 public:
  using Count = std::uint64_t;
  using Map = std::map<P, Count>;

  Multiset() = default;
  Multiset(std::initializer_list<std::pair<const P, Count>> init) {
    for (const auto& [p, n] : init) add(p, n);
  }

  void add(const P& p, Count n = 1) {
    if (n == 0) return;
    entries_[p] += n;
    size_ += n;
  }

  Count operator()(const P& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? 0 : it->second;
  }

  Count size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const Map& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::vector<P> support() const {
    std::vector<P> out;
    out.reserve(entries_.size());
    for (const auto& kv : entries_) out.push_back(kv.first);
    return out;
  }

  Multiset& operator+=(const Multiset& other) {
    for (const auto& [p, n] : other.entries_) add(p, n);
    return *this;
  }
  friend Multiset operator+(Multiset a, const Multiset& b) { return a += b; }

  friend bool operator==(const Multiset& a, const Multiset& b) { return a.entries_ == b.entries_; }

  // Lexicographic order on the sorted sequence of elements (with repetition),
  // so that 2|0> < 1|0>+1|1> < 2|1>.
  friend bool operator<(const Multiset& a, const Multiset& b) {
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    Count ra = ia == a.entries_.end() ? 0 : ia->second;
    Count rb = ib == b.entries_.end() ? 0 : ib->second;
    while (true) {
      const bool ea = ia == a.entries_.end();
      const bool eb = ib == b.entries_.end();
      if (ea || eb) return ea && !eb;
      if (ia->first < ib->first) return true;
      if (ib->first < ia->first) return false;
      const Count m = std::min(ra, rb);
      ra -= m;
      rb -= m;
      if (ra == 0 && ++ia != a.entries_.end()) ra = ia->second;
      if (rb == 0 && ++ib != b.entries_.end()) rb = ib->second;
    }
  }

 private:
  Map entries_;
  Count size_ = 0;
};

/// Functorial action: multiplicities of points with the same image are added.
template <class P, class F>
auto mset_map(F&& f, const Multiset<P>& phi) {
  using Q = std::decay_t<std::invoke_result_t<F, const P&>>;
  Multiset<Q> out;
  for (const auto& [p, n] : phi) out.add(std::invoke(f, p), n);
  return out;
}

/// ‖φ‖! / ∏ φ(x)!
template <class P>
Integer mset_coefficient(const Multiset<P>& phi) {
  Integer c = factorial(static_cast<unsigned>(phi.size()));
  for (const auto& [p, n] : phi) c /= factorial(static_cast<unsigned>(n));
  return c;
}

/// Number of multisets of size k over a base of the given cardinality.
inline Integer count_msets(std::size_t base_size, unsigned k) {
  if (base_size == 0) return k == 0 ? 1 : 0;
  return binomial_coefficient(static_cast<unsigned>(k + base_size - 1),
                              static_cast<unsigned>(base_size - 1));
}

/// All multisets of size k over `base`, in ascending multiset order.
/// Throws ResourceLimit when the count exceeds `cap`.
template <class P>
std::vector<Multiset<P>> enumerate_msets(std::vector<P> base, unsigned k,
                                         std::uint64_t cap = enumeration_cap()) {
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  if (base.empty()) throw Error(ErrorKind::WrongSpace, "enumerate_msets: empty base");
  const Integer total = count_msets(base.size(), k);
  if (total > Integer(std::to_string(cap)))
    throw Error(ErrorKind::ResourceLimit,
                "enumerate_msets: " + total.get_str() + " multisets exceeds cap " + std::to_string(cap));

  std::vector<Multiset<P>> out;
  out.reserve(total.get_ui());
  std::vector<typename Multiset<P>::Count> counts(base.size(), 0);
  // Counts vectors in descending lexicographic order.
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == base.size()) {
      counts[i] = left;
      Multiset<P> m;
      for (std::size_t j = 0; j < base.size(); ++j) m.add(base[j], counts[j]);
      out.push_back(std::move(m));
      return;
    }
    for (unsigned c = left + 1; c-- > 0;) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, k);
  return out;
}

template <class P>
std::string to_ket(const Multiset<P>& phi) {
  if (phi.empty()) return "0";
  std::string s;
  for (const auto& [p, n] : phi) {
    if (!s.empty()) s += " + ";
    s += std::to_string(n) + "|" + to_ket_label(p) + ">";
  }
  return s;
}

template <class P>
std::string to_ket_label(const Multiset<P>& phi) {
  return to_ket(phi);
}

}  // namespace bitoss
