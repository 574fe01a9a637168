#pragma once

#include <map>
#include <vector>

#include "bitoss/dist.hpp"

namespace bitoss {

/// A point-indexed family of distributions (a conditional probability table),
/// stored extensionally.
template <class X, class Y, class S>
class Channel {
 public:
  using Kernel = std::map<X, Dist<Y, S>>;

  Channel() = default;
  explicit Channel(Kernel kernel) : kernel_(std::move(kernel)) {
    for (const auto& [x, d] : kernel_) {
      if (d.empty()) throw Error(ErrorKind::NotNormalized, "channel kernel entry is empty");
    }
  }

  template <class F>
  static Channel from_function(const std::vector<X>& domain, F&& f) {
    Kernel k;
    for (const auto& x : domain) k.emplace(x, std::invoke(f, x));
    return Channel(std::move(k));
  }

  const Dist<Y, S>& operator()(const X& x) const {
    auto it = kernel_.find(x);
    if (it == kernel_.end())
      throw Error(ErrorKind::DomainMismatch, "channel has no kernel entry at " + to_ket_label(x));
    return it->second;
  }

  bool defined_at(const X& x) const { return kernel_.count(x) != 0; }

  std::vector<X> domain() const {
    std::vector<X> out;
    for (const auto& kv : kernel_) out.push_back(kv.first);
    return out;
  }

  const Kernel& kernel() const { return kernel_; }
  std::size_t size() const { return kernel_.size(); }

 private:
  Kernel kernel_;
};

/// Pushforward: y ↦ Σ_x ω(x)·c(x)(y).
template <class X, class Y, class S>
Dist<Y, S> push(const Channel<X, Y, S>& c, const Dist<X, S>& omega) {
  std::map<Y, S> m;
  for (const auto& [x, wx] : omega) {
    for (const auto& [y, cy] : c(x)) {
      auto [it, inserted] = m.try_emplace(y, wx * cy);
      if (!inserted) it->second += wx * cy;
    }
  }
  if constexpr (NumTraits<S>::exact)
    return Dist<Y, S>::from_map(std::move(m));
  else
    return Dist<Y, S>::normalize(std::move(m));
}

/// Bayesian inversion of c with prior ω. The result is defined on the support
/// of push(c, ω): dagger(y)(x) = ω(x)·c(x)(y) / push(c, ω)(y).
template <class X, class Y, class S>
Channel<Y, X, S> dagger(const Channel<X, Y, S>& c, const Dist<X, S>& omega) {
  std::map<Y, std::map<X, S>> joint;
  for (const auto& [x, wx] : omega) {
    for (const auto& [y, cy] : c(x)) joint[y].emplace(x, wx * cy);
  }
  typename Channel<Y, X, S>::Kernel k;
  for (auto& [y, row] : joint) k.emplace(y, Dist<X, S>::normalize(std::move(row)));
  return Channel<Y, X, S>(std::move(k));
}

/// Dagger evaluated at a single observation; NotFullSupport when the
/// observation has zero predicted probability.
template <class X, class Y, class S>
Dist<X, S> dagger_at(const Channel<X, Y, S>& c, const Dist<X, S>& omega, const Y& y) {
  std::map<X, S> row;
  for (const auto& [x, wx] : omega) {
    S v = wx * c(x)(y);
    if (!NumTraits<S>::is_zero(v)) row.emplace(x, std::move(v));
  }
  if (row.empty())
    throw Error(ErrorKind::NotFullSupport, "dagger: observation " + to_ket_label(y) + " has zero probability");
  return Dist<X, S>::normalize(std::move(row));
}

}  // namespace bitoss
