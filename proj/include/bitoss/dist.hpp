#pragma once

// Finite distributions and their algebra. All operations are pure and
// deterministic: iteration follows the point order of std::map.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "bitoss/error.hpp"
#include "bitoss/multiset.hpp"
#include "bitoss/numeric.hpp"
#include "bitoss/point.hpp"
#include "bitoss/rng.hpp"

namespace bitoss {

/// Float-mode distributions must sum to 1 within this tolerance.
inline constexpr double kNormTolerance = 1e-9;

template <class P, class S>
class Dist {
 public:
  using Point = P;
  using Scalar = S;
  using Map = std::map<P, S>;

  /// Empty placeholder; not a valid distribution until assigned.
  Dist() = default;

  /// Checks that weights are nonnegative and sum to one (exactly for
  /// rationals). Zero entries are dropped.
  static Dist from_map(Map m) {
    Dist d(strip_zeros(std::move(m)));
    d.check_normalized();
    return d;
  }

  /// Divides nonnegative weights by their total.
  static Dist normalize(Map weights) {
    Map m = strip_zeros(std::move(weights));
    S total = NumTraits<S>::zero();
    for (const auto& kv : m) total += kv.second;
    if (NumTraits<S>::is_zero(total)) throw Error(ErrorKind::NotNormalized, "normalize: zero total weight");
    for (auto& kv : m) kv.second /= total;
    return Dist(std::move(m));
  }

  static Dist point_mass(const P& p) {
    Map m;
    m.emplace(p, NumTraits<S>::one());
    return Dist(std::move(m));
  }

  S operator()(const P& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? NumTraits<S>::zero() : it->second;
  }

  bool contains(const P& p) const { return entries_.count(p) != 0; }
  const Map& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<P> support() const {
    std::vector<P> out;
    out.reserve(entries_.size());
    for (const auto& kv : entries_) out.push_back(kv.first);
    return out;
  }

  S total() const {
    S t = NumTraits<S>::zero();
    for (const auto& kv : entries_) t += kv.second;
    return t;
  }

  friend bool operator==(const Dist& a, const Dist& b) { return a.entries_ == b.entries_; }

 private:
  explicit Dist(Map m) : entries_(std::move(m)) {}

  static Map strip_zeros(Map m) {
    for (auto it = m.begin(); it != m.end();) {
      if (it->second < 0) throw Error(ErrorKind::OutOfRange, "negative probability");
      if (NumTraits<S>::is_zero(it->second))
        it = m.erase(it);
      else
        ++it;
    }
    return m;
  }

  void check_normalized() const {
    const S t = total();
    if constexpr (NumTraits<S>::exact) {
      if (t != 1) throw Error(ErrorKind::NotNormalized, "probabilities sum to " + to_string(t));
    } else {
      if (std::abs(t - 1.0) > kNormTolerance)
        throw Error(ErrorKind::NotNormalized, "probabilities sum to " + std::to_string(t));
    }
  }

  Map entries_;
};

template <class S>
using PDist = Dist<Point, S>;

/// Frequentist learning: φ(x) / ‖φ‖.
template <class S, class P>
Dist<P, S> flrn(const Multiset<P>& phi) {
  if (phi.empty()) throw Error(ErrorKind::EmptyMultiset, "flrn of empty multiset");
  typename Dist<P, S>::Map m;
  for (const auto& [p, n] : phi) m.emplace(p, NumTraits<S>::from_int(static_cast<long>(n)));
  return Dist<P, S>::normalize(std::move(m));
}

/// Pushforward along a function.
template <class P, class S, class F>
auto dist_map(F&& f, const Dist<P, S>& omega) {
  using Q = std::decay_t<std::invoke_result_t<F, const P&>>;
  std::map<Q, S> m;
  for (const auto& [p, v] : omega) {
    auto [it, inserted] = m.try_emplace(std::invoke(f, p), v);
    if (!inserted) it->second += v;
  }
  return Dist<Q, S>::from_map(std::move(m));
}

template <class S>
PDist<S> marginal(const PDist<S>& omega, std::size_t i) {
  return dist_map([i](const Point& p) { return project(p, i); }, omega);
}

/// Product distribution; points are concatenated.
template <class S>
PDist<S> tensor(const PDist<S>& omega, const PDist<S>& rho) {
  typename PDist<S>::Map m;
  for (const auto& [x, a] : omega) {
    for (const auto& [y, b] : rho) {
      Point xy = x;
      xy.insert(xy.end(), y.begin(), y.end());
      m.emplace(std::move(xy), a * b);
    }
  }
  return PDist<S>::from_map(std::move(m));
}

/// r00·r11 != r01·r10 on the four-point space 2x2.
template <class S>
bool is_entwined(const PDist<S>& tau) {
  for (const auto& [p, v] : tau) {
    if (p.size() != 2 || (p[0] != 0 && p[0] != 1) || (p[1] != 0 && p[1] != 1))
      throw Error(ErrorKind::WrongSpace, "is_entwined: point " + to_ket_label(p) + " not in 2x2");
  }
  const S lhs = tau({0, 0}) * tau({1, 1});
  const S rhs = tau({0, 1}) * tau({1, 0});
  if constexpr (NumTraits<S>::exact)
    return lhs != rhs;
  else
    return std::abs(lhs - rhs) > 1e-12;
}

/// Pushforward of ω⊗ρ along a commutative monoid operation.
template <class P, class S, class Add>
Dist<P, S> convolve(const Dist<P, S>& omega, const Dist<P, S>& rho, Add&& add) {
  typename Dist<P, S>::Map m;
  for (const auto& [x, a] : omega) {
    for (const auto& [y, b] : rho) {
      auto [it, inserted] = m.try_emplace(std::invoke(add, x, y), a * b);
      if (!inserted) it->second += a * b;
    }
  }
  return Dist<P, S>::from_map(std::move(m));
}

template <class S>
PDist<S> convolve(const PDist<S>& omega, const PDist<S>& rho) {
  return convolve(omega, rho, add_points);
}

template <class P, class S>
using Observable = std::function<S(const P&)>;

/// Expected value Σ ω(x)·p(x).
template <class P, class S, class F>
S validity(const Dist<P, S>& omega, F&& p) {
  S total = NumTraits<S>::zero();
  for (const auto& [x, v] : omega) total += v * static_cast<S>(std::invoke(p, x));
  return total;
}

template <class S>
struct Moments {
  std::vector<S> mean;
  std::vector<std::vector<S>> cov;  // cov[i][i] is the variance

  std::vector<S> var() const {
    std::vector<S> v;
    for (std::size_t i = 0; i < cov.size(); ++i) v.push_back(cov[i][i]);
    return v;
  }
};

/// Mean vector and covariance matrix of a distribution over integer tuples.
template <class S>
Moments<S> moments(const PDist<S>& omega) {
  if (omega.empty()) throw Error(ErrorKind::EmptyMultiset, "moments of empty distribution");
  const std::size_t n = omega.begin()->first.size();
  Moments<S> out;
  out.mean.assign(n, NumTraits<S>::zero());
  std::vector<std::vector<S>> second(n, std::vector<S>(n, NumTraits<S>::zero()));
  for (const auto& [x, v] : omega) {
    if (x.size() != n) throw Error(ErrorKind::WrongSpace, "moments: mixed point arity");
    for (std::size_t i = 0; i < n; ++i) {
      const S xi = NumTraits<S>::from_int(x[i]);
      out.mean[i] += v * xi;
      for (std::size_t j = i; j < n; ++j) second[i][j] += v * xi * NumTraits<S>::from_int(x[j]);
    }
  }
  out.cov.assign(n, std::vector<S>(n, NumTraits<S>::zero()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      out.cov[i][j] = second[i][j] - out.mean[i] * out.mean[j];
      out.cov[j][i] = out.cov[i][j];
    }
  }
  return out;
}

/// Σ p(x)·ln(p(x)/q(x)) over supp(p), evaluated in double precision.
template <class P, class S1, class S2>
double kl_divergence(const Dist<P, S1>& p, const Dist<P, S2>& q) {
  double d = 0.0;
  for (const auto& [x, px] : p) {
    const double a = NumTraits<S1>::to_double(px);
    const double b = NumTraits<S2>::to_double(q(x));
    if (b <= 0.0)
      throw Error(ErrorKind::SupportMismatch, "kl_divergence: q vanishes on a support point of p");
    d += a * std::log(a / b);
  }
  return d;
}

/// n independent draws via inverse CDF over the point order, driven by
/// CounterRng(seed). Rational probabilities are converted to double first.
template <class P, class S>
Multiset<P> sample(const Dist<P, S>& omega, std::uint64_t n, std::uint64_t seed) {
  Multiset<P> out;
  if (n == 0) return out;
  if (omega.empty()) throw Error(ErrorKind::EmptyMultiset, "sample from empty distribution");
  std::vector<const P*> points;
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& [x, v] : omega) {
    acc += NumTraits<S>::to_double(v);
    points.push_back(&x);
    cdf.push_back(acc);
  }
  CounterRng rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= points.size()) idx = points.size() - 1;
    out.add(*points[idx]);
  }
  return out;
}

/// Converts an exact distribution to float mode.
template <class P>
Dist<P, double> to_float(const Dist<P, Rational>& omega) {
  typename Dist<P, double>::Map m;
  for (const auto& [x, v] : omega) m.emplace(x, v.get_d());
  return Dist<P, double>::normalize(std::move(m));
}

template <class P, class S>
std::string to_ket(const Dist<P, S>& omega) {
  std::string s;
  for (const auto& [x, v] : omega) {
    if (!s.empty()) s += " + ";
    if constexpr (NumTraits<S>::exact)
      s += to_string(v);
    else
      s += std::to_string(v);
    s += "|" + to_ket_label(x) + ">";
  }
  return s;
}

}  // namespace bitoss
