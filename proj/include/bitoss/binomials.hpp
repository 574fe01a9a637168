#pragma once

// Flip, binomial and multinomial distributions, the marginal heads map, and
// multivariate binomials built as the pushforward of a multinomial along it.

#include <string>
#include <vector>

#include "bitoss/dist.hpp"
#include "bitoss/multiset.hpp"

namespace bitoss {

inline constexpr unsigned kMaxCoinDim = 3;

/// A distribution over the bit tuples {0,1}^N.
template <class S>
class Coin {
 public:
  Coin() = default;

  /// Throws WrongSpace if some point is not an N-bit tuple, ResourceLimit if
  /// N exceeds `max_dim`.
  static Coin make(PDist<S> dist, unsigned max_dim = kMaxCoinDim);

  /// Two-coin from its four probabilities in point order 00, 01, 10, 11.
  static Coin two(const S& p00, const S& p01, const S& p10, const S& p11);

  unsigned dim() const { return dim_; }
  const PDist<S>& dist() const { return dist_; }
  S operator()(const Point& p) const { return dist_(p); }

  friend bool operator==(const Coin& a, const Coin& b) { return a.dim_ == b.dim_ && a.dist_ == b.dist_; }

 private:
  Coin(unsigned dim, PDist<S> dist) : dim_(dim), dist_(std::move(dist)) {}
  unsigned dim_ = 0;
  PDist<S> dist_;
};

/// Distribution over the grid {0,...,K}^N.
template <class S>
struct GridDist {
  unsigned K = 0;
  unsigned N = 0;
  PDist<S> dist;

  S operator()(const Point& p) const { return dist(p); }
  friend bool operator==(const GridDist& a, const GridDist& b) {
    return a.K == b.K && a.N == b.N && a.dist == b.dist;
  }
};

/// r|1> + (1-r)|0>; OutOfRange unless 0 <= r <= 1.
template <class S>
Coin<S> flip(const S& r);

/// n ↦ C(K,n)·r^n·(1-r)^(K-n) over one-element points {n}.
template <class S>
PDist<S> binomial(unsigned K, const S& r);

/// ⟨φ⟩·∏ ω(x)^φ(x)
template <class P, class S>
S multinomial_term(const Multiset<P>& phi, const Dist<P, S>& omega) {
  S v = NumTraits<S>::from_integer(mset_coefficient(phi));
  for (const auto& [x, n] : phi) v *= ipow(omega(x), static_cast<unsigned>(n));
  return v;
}

/// Multinomial distribution over the multisets of size K on supp(ω).
template <class P, class S>
Dist<Multiset<P>, S> multinomial(unsigned K, const Dist<P, S>& omega,
                                 std::uint64_t cap = enumeration_cap()) {
  typename Dist<Multiset<P>, S>::Map m;
  for (auto& phi : enumerate_msets(omega.support(), K, cap)) {
    S v = multinomial_term(phi, omega);
    m.emplace(std::move(phi), std::move(v));
  }
  if constexpr (NumTraits<S>::exact)
    return Dist<Multiset<P>, S>::from_map(std::move(m));
  else
    return Dist<Multiset<P>, S>::normalize(std::move(m));
}

/// Marginal heads: component i counts the elements whose i-th bit is 1.
/// N is taken from the points; an empty multiset needs the explicit form.
Point heads(const Multiset<Point>& phi);
Point heads(const Multiset<Point>& phi, unsigned N);

/// The multisets of size K over 2x2 whose heads are (n1, n2), via the
/// closed-form parametrisation of the inverse image.
std::vector<Multiset<Point>> fiber(unsigned K, unsigned n1, unsigned n2);

/// Multivariate binomial as dist_map(heads, multinomial(K, γ)). Serial
/// reference path; works for every N.
template <class S>
GridDist<S> mvbin_functorial(unsigned K, const Coin<S>& gamma, std::uint64_t cap = enumeration_cap());

/// Bivariate binomial summed fiber by fiber. Grid rows are evaluated in
/// parallel (OpenMP); agrees exactly with mvbin_functorial.
template <class S>
GridDist<S> bivbin_direct(unsigned K, const Coin<S>& gamma);

/// The literature formulation that counts zeros in each coordinate.
template <class S>
GridDist<S> bivbin_tails(unsigned K, const Coin<S>& gamma);

/// bivbin_direct for N = 2, mvbin_functorial otherwise.
template <class S>
GridDist<S> mvbin(unsigned K, const Coin<S>& gamma);

/// Flips every bit of every point.
template <class S>
Coin<S> swap_bits(const Coin<S>& gamma);

enum class RecoverPolicy {
  strict,  // OutOfRange beyond tolerance; tiny float excursions clamped
  clamp,   // always clamp to [0,1] and renormalize
};

template <class S>
struct Recovered {
  Coin<S> coin;
  bool clamped = false;
};

/// Two-coin from the mean and covariance of a grid distribution with toss
/// count K (K >= 1). Exact inverse of bivbin[K] in rational mode.
template <class S>
Recovered<S> recover(const PDist<S>& sigma, unsigned K, RecoverPolicy policy = RecoverPolicy::strict);

/// Grid probabilities as CSV: one row per n1, one column per n2 (N = 2), or a
/// single column (N = 1).
template <class S>
std::string grid_csv(const GridDist<S>& grid);

}  // namespace bitoss
