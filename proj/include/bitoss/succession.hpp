#pragma once

// Rules of succession: posterior means after an observation (the mean of a
// dagger), in closed form, each with a brute-force counterpart.

#include <functional>
#include <vector>

#include "bitoss/binomials.hpp"
#include "bitoss/channel.hpp"
#include "bitoss/dist.hpp"

namespace bitoss {

struct BetaParams {
  long alpha = 1;
  long beta = 1;

  /// OutOfRange unless both parameters are positive integers.
  static BetaParams make(long alpha, long beta);
  Rational mean() const;
  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

/// (α + n, β + K − n)
BetaParams beta_update(const BetaParams& b, unsigned K, unsigned n);

/// (α + n) / (α + β + K)
Rational beta_succession_mean(const BetaParams& b, unsigned K, unsigned n);

/// Dirichlet parameter: a multiset with multiplicity >= 1 at every point of
/// its base.
class DirichletParams {
 public:
  /// Base defaults to the support of psi.
  static DirichletParams make(Multiset<Point> psi);
  static DirichletParams make(Multiset<Point> psi, std::vector<Point> base);
  /// 1 at every point of the base.
  static DirichletParams uniform(std::vector<Point> base);

  const Multiset<Point>& psi() const { return psi_; }
  const std::vector<Point>& base() const { return base_; }
  PDist<Rational> mean() const { return flrn<Rational>(psi_); }

 private:
  DirichletParams(Multiset<Point> psi, std::vector<Point> base)
      : psi_(std::move(psi)), base_(std::move(base)) {}
  Multiset<Point> psi_;
  std::vector<Point> base_;
};

/// ψ + φ; WrongSpace if φ leaves the base.
DirichletParams dirichlet_update(const DirichletParams& d, const Multiset<Point>& phi);

/// Flrn(ψ + φ)
PDist<Rational> dirichlet_succession_mean(const DirichletParams& d, const Multiset<Point>& phi);

/// Flrn of Σ (ψ + φ) over the fiber of (n1, n2), for a Dirichlet prior over
/// the two-coins and a bivariate binomial observation.
PDist<Rational> bivbin_dirichlet_mean(const DirichletParams& d, unsigned K, unsigned n1, unsigned n2);

/// Exact posterior mean: the fiber's Flrn(ψ + φ) averaged with
/// Dirichlet-multinomial weights ⟨φ⟩·∏ ψ(x)^(φ(x)) / |ψ|^(K) (rising powers).
PDist<Rational> bivbin_dirichlet_mean_oracle(const DirichletParams& d, unsigned K, unsigned n1, unsigned n2);

/// Dirichlet-multinomial probability of drawing φ under prior ψ.
Rational dirichlet_multinomial_pmf(const Multiset<Point>& psi, const Multiset<Point>& phi);

struct PoissonParams {
  double lambda = 0.0;
  unsigned truncation = 60;

  /// Truncation max(60, ceil(λ + 12√λ + 12)).
  static PoissonParams make(double lambda);
  /// OutOfRange if the truncated mass is below 1 − 1e-9.
  static PoissonParams make(double lambda, unsigned truncation);
};

/// e^(−λ)·λ^k / k!, evaluated in log space.
double poisson_pmf(double lambda, unsigned k);

/// n + (1 − r)·λ
double binomial_poisson_mean(double r, double lambda, unsigned n);

/// Posterior mean of the emitted count for a two-coin detector with Poisson
/// source, observing (n1, n2).
double bivbin_poisson_mean(const Coin<double>& gamma, double lambda, unsigned n1, unsigned n2);

/// Σ_K K·prior(K)·L(K) / Σ_K prior(K)·L(K) over K ≤ M, where L(K) is the
/// probability of the observation when K particles are emitted.
double truncated_dagger_mean(const std::function<double(unsigned)>& likelihood, const PoissonParams& prior);

/// Same, with the channel given as a builder K ↦ distribution.
double truncated_dagger_mean(const std::function<PDist<double>(unsigned)>& chan, const PoissonParams& prior,
                             const Point& observation);

}  // namespace bitoss
