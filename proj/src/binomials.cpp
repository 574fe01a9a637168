#include "bitoss/binomials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bitoss {

namespace {

bool is_bit_tuple(const Point& p, std::size_t n) {
  return p.size() == n && std::all_of(p.begin(), p.end(), [](int b) { return b == 0 || b == 1; });
}

template <class S>
void check_probability(const S& r, const char* what) {
  if (r < 0 || r > 1) throw Error(ErrorKind::OutOfRange, std::string(what) + ": probability outside [0,1]");
}

template <class S>
const S& tolerance() {
  static const S tol = [] {
    if constexpr (NumTraits<S>::exact)
      return S(0);
    else
      return S(1e-9);
  }();
  return tol;
}

template <class S>
typename PDist<S>::Map to_map_finish(std::vector<S>& cells, const std::vector<Point>& points) {
  typename PDist<S>::Map m;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!NumTraits<S>::is_zero(cells[i])) m.emplace(points[i], std::move(cells[i]));
  }
  return m;
}

template <class S>
PDist<S> finish(typename PDist<S>::Map m) {
  if constexpr (NumTraits<S>::exact)
    return PDist<S>::from_map(std::move(m));
  else
    return PDist<S>::normalize(std::move(m));
}

}  // namespace

// Coin

template <class S>
Coin<S> Coin<S>::make(PDist<S> dist, unsigned max_dim) {
  if (dist.empty()) throw Error(ErrorKind::WrongSpace, "coin: empty distribution");
  const std::size_t n = dist.begin()->first.size();
  if (n == 0) throw Error(ErrorKind::WrongSpace, "coin: zero-dimensional points");
  for (const auto& [p, v] : dist) {
    if (!is_bit_tuple(p, n)) throw Error(ErrorKind::WrongSpace, "coin: point " + to_ket_label(p) + " is not a bit tuple");
  }
  if (n > max_dim)
    throw Error(ErrorKind::ResourceLimit,
                "coin dimension " + std::to_string(n) + " exceeds cap " + std::to_string(max_dim));
  return Coin(static_cast<unsigned>(n), std::move(dist));
}

template <class S>
Coin<S> Coin<S>::two(const S& p00, const S& p01, const S& p10, const S& p11) {
  typename PDist<S>::Map m{{{0, 0}, p00}, {{0, 1}, p01}, {{1, 0}, p10}, {{1, 1}, p11}};
  return make(PDist<S>::from_map(std::move(m)));
}

template <class S>
Coin<S> flip(const S& r) {
  check_probability(r, "flip");
  typename PDist<S>::Map m{{{0}, NumTraits<S>::one() - r}, {{1}, r}};
  return Coin<S>::make(PDist<S>::from_map(std::move(m)));
}

template <class S>
PDist<S> binomial(unsigned K, const S& r) {
  check_probability(r, "binomial");
  const S q = NumTraits<S>::one() - r;
  typename PDist<S>::Map m;
  for (unsigned n = 0; n <= K; ++n) {
    S v = NumTraits<S>::from_integer(binomial_coefficient(K, n)) * ipow(r, n) * ipow(q, K - n);
    if (!NumTraits<S>::is_zero(v)) m.emplace(Point{static_cast<int>(n)}, std::move(v));
  }
  return finish<S>(std::move(m));
}

// Heads and fibers

Point heads(const Multiset<Point>& phi) {
  if (phi.empty()) throw Error(ErrorKind::WrongSpace, "heads: dimension of an empty multiset is unknown");
  return heads(phi, static_cast<unsigned>(phi.begin()->first.size()));
}

Point heads(const Multiset<Point>& phi, unsigned N) {
  Point out(N, 0);
  for (const auto& [b, n] : phi) {
    if (!is_bit_tuple(b, N)) throw Error(ErrorKind::WrongSpace, "heads: point " + to_ket_label(b) + " is not an N-bit tuple");
    for (unsigned i = 0; i < N; ++i) out[i] += b[i] * static_cast<int>(n);
  }
  return out;
}

std::vector<Multiset<Point>> fiber(unsigned K, unsigned n1, unsigned n2) {
  if (n1 > K || n2 > K) throw Error(ErrorKind::OutOfRange, "fiber: heads count exceeds K");
  std::vector<Multiset<Point>> out;
  using C = Multiset<Point>::Count;
  if (n1 <= n2) {
    for (unsigned i = 0; i <= std::min(n1, K - n2); ++i) {
      Multiset<Point> m;
      m.add({0, 0}, C{K - n2 - i});
      m.add({0, 1}, C{n2 - n1 + i});
      m.add({1, 0}, C{i});
      m.add({1, 1}, C{n1 - i});
      out.push_back(std::move(m));
    }
  } else {
    for (unsigned i = 0; i <= std::min(n2, K - n1); ++i) {
      Multiset<Point> m;
      m.add({0, 0}, C{K - n1 - i});
      m.add({0, 1}, C{i});
      m.add({1, 0}, C{n1 - n2 + i});
      m.add({1, 1}, C{n2 - i});
      out.push_back(std::move(m));
    }
  }
  return out;
}

// Multivariate binomials

template <class S>
GridDist<S> mvbin_functorial(unsigned K, const Coin<S>& gamma, std::uint64_t cap) {
  const unsigned N = gamma.dim();
  auto mn = multinomial(K, gamma.dist(), cap);
  auto grid = dist_map([N](const Multiset<Point>& phi) { return heads(phi, N); }, mn);
  return GridDist<S>{K, N, std::move(grid)};
}

template <class S>
GridDist<S> bivbin_direct(unsigned K, const Coin<S>& gamma) {
  if (gamma.dim() != 2) throw Error(ErrorKind::WrongSpace, "bivbin_direct: needs a two-coin");
  const std::array<Point, 4> corners{Point{0, 0}, Point{0, 1}, Point{1, 0}, Point{1, 1}};
  // pw[c][e] = gamma(corner c)^e
  std::array<std::vector<S>, 4> pw;
  for (std::size_t c = 0; c < 4; ++c) {
    const S g = gamma(corners[c]);
    pw[c].resize(K + 1);
    pw[c][0] = NumTraits<S>::one();
    for (unsigned e = 1; e <= K; ++e) pw[c][e] = pw[c][e - 1] * g;
  }
  std::vector<S> fact(K + 1);
  for (unsigned e = 0; e <= K; ++e) fact[e] = NumTraits<S>::from_integer(factorial(e));

  const int side = static_cast<int>(K) + 1;
  std::vector<S> cells(static_cast<std::size_t>(side) * side, NumTraits<S>::zero());

#pragma omp parallel for schedule(dynamic)
  for (int n1 = 0; n1 < side; ++n1) {
    for (int n2 = 0; n2 < side; ++n2) {
      S acc = NumTraits<S>::zero();
      for (const auto& phi : fiber(K, static_cast<unsigned>(n1), static_cast<unsigned>(n2))) {
        S term = fact[K];
        for (std::size_t c = 0; c < 4; ++c) {
          const auto n = static_cast<unsigned>(phi(corners[c]));
          term /= fact[n];
          term *= pw[c][n];
        }
        acc += term;
      }
      cells[static_cast<std::size_t>(n1) * side + n2] = std::move(acc);
    }
  }
  auto m = to_map_finish(cells, grid_points(K, 2));
  return GridDist<S>{K, 2, finish<S>(std::move(m))};
}

template <class S>
GridDist<S> bivbin_tails(unsigned K, const Coin<S>& gamma) {
  if (gamma.dim() != 2) throw Error(ErrorKind::WrongSpace, "bivbin_tails: needs a two-coin");
  const S g00 = gamma({0, 0}), g01 = gamma({0, 1}), g10 = gamma({1, 0}), g11 = gamma({1, 1});
  typename PDist<S>::Map m;
  for (unsigned k = 0; k <= K; ++k) {
    for (unsigned l = 0; l <= K; ++l) {
      S acc = NumTraits<S>::zero();
      const unsigned lo = k + l > K ? k + l - K : 0;
      for (unsigned i = lo; i <= std::min(k, l); ++i) {
        const Integer coeff =
            factorial(K) / (factorial(i) * factorial(k - i) * factorial(l - i) * factorial(K - k - l + i));
        acc += NumTraits<S>::from_integer(coeff) * ipow(g00, i) * ipow(g01, k - i) * ipow(g10, l - i) *
               ipow(g11, K - k - l + i);
      }
      if (!NumTraits<S>::is_zero(acc)) m.emplace(Point{static_cast<int>(k), static_cast<int>(l)}, std::move(acc));
    }
  }
  return GridDist<S>{K, 2, finish<S>(std::move(m))};
}

template <class S>
GridDist<S> mvbin(unsigned K, const Coin<S>& gamma) {
  return gamma.dim() == 2 ? bivbin_direct(K, gamma) : mvbin_functorial(K, gamma);
}

template <class S>
Coin<S> swap_bits(const Coin<S>& gamma) {
  return Coin<S>::make(dist_map(
      [](const Point& p) {
        Point q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) q[i] = 1 - p[i];
        return q;
      },
      gamma.dist()));
}

// Recovery from moments

template <class S>
Recovered<S> recover(const PDist<S>& sigma, unsigned K, RecoverPolicy policy) {
  if (K == 0) throw Error(ErrorKind::OutOfRange, "recover: K must be at least 1");
  for (const auto& [p, v] : sigma) {
    if (p.size() != 2 || p[0] < 0 || p[1] < 0 || p[0] > static_cast<int>(K) || p[1] > static_cast<int>(K))
      throw Error(ErrorKind::WrongSpace, "recover: point " + to_ket_label(p) + " outside the grid");
  }
  const Moments<S> mo = moments(sigma);
  const S k = NumTraits<S>::from_int(K);
  const S g11 = mo.cov[0][1] / k + mo.mean[0] * mo.mean[1] / (k * k);
  const S g10 = mo.mean[0] / k - g11;
  const S g01 = mo.mean[1] / k - g11;
  const S g00 = NumTraits<S>::one() - g10 - g01 - g11;
  std::array<S, 4> g{g00, g01, g10, g11};

  bool clamped = false;
  const S& tol = tolerance<S>();
  for (auto& v : g) {
    if (policy == RecoverPolicy::strict && (v < -tol || v > 1 + tol))
      throw Error(ErrorKind::OutOfRange, "recover: moments do not come from a bivariate binomial");
    if (v < 0) {
      v = 0;
      clamped = true;
    } else if (v > 1) {
      v = 1;
      clamped = true;
    }
  }
  typename PDist<S>::Map m{{{0, 0}, g[0]}, {{0, 1}, g[1]}, {{1, 0}, g[2]}, {{1, 1}, g[3]}};
  auto dist = clamped ? PDist<S>::normalize(std::move(m)) : finish<S>(std::move(m));
  return Recovered<S>{Coin<S>::make(std::move(dist)), clamped};
}

template <class S>
std::string grid_csv(const GridDist<S>& grid) {
  if (grid.N != 1 && grid.N != 2) throw Error(ErrorKind::WrongSpace, "grid_csv: only N = 1 or N = 2");
  std::ostringstream os;
  char buf[40];
  const int side = static_cast<int>(grid.K) + 1;
  const int cols = grid.N == 2 ? side : 1;
  for (int n1 = 0; n1 < side; ++n1) {
    for (int n2 = 0; n2 < cols; ++n2) {
      const Point p = grid.N == 2 ? Point{n1, n2} : Point{n1};
      std::snprintf(buf, sizeof buf, "%.17g", NumTraits<S>::to_double(grid(p)));
      if (n2) os << ',';
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

#define BITOSS_INSTANTIATE(S)                                                           \
  template class Coin<S>;                                                               \
  template Coin<S> flip<S>(const S&);                                                   \
  template PDist<S> binomial<S>(unsigned, const S&);                                    \
  template GridDist<S> mvbin_functorial<S>(unsigned, const Coin<S>&, std::uint64_t);    \
  template GridDist<S> bivbin_direct<S>(unsigned, const Coin<S>&);                      \
  template GridDist<S> bivbin_tails<S>(unsigned, const Coin<S>&);                       \
  template GridDist<S> mvbin<S>(unsigned, const Coin<S>&);                              \
  template Coin<S> swap_bits<S>(const Coin<S>&);                                        \
  template Recovered<S> recover<S>(const PDist<S>&, unsigned, RecoverPolicy);           \
  template std::string grid_csv<S>(const GridDist<S>&);

BITOSS_INSTANTIATE(Rational)
BITOSS_INSTANTIATE(double)

#undef BITOSS_INSTANTIATE

}  // namespace bitoss
