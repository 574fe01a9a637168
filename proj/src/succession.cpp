#include "bitoss/succession.hpp"

#include <algorithm>
#include <cmath>

namespace bitoss {

namespace {

Integer rising(const Integer& a, unsigned n) {
  Integer r = 1;
  for (unsigned i = 0; i < n; ++i) r *= a + i;
  return r;
}

void check_observation(unsigned K, unsigned n1, unsigned n2) {
  if (n1 > K || n2 > K) throw Error(ErrorKind::OutOfRange, "observation exceeds K");
}

void check_rate(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::OutOfRange, "Poisson rate must be >= 0");
}

}  // namespace

BetaParams BetaParams::make(long alpha, long beta) {
  if (alpha < 1 || beta < 1) throw Error(ErrorKind::OutOfRange, "Beta parameters must be positive integers");
  return BetaParams{alpha, beta};
}

Rational BetaParams::mean() const { return make_rational(alpha, alpha + beta); }

BetaParams beta_update(const BetaParams& b, unsigned K, unsigned n) {
  if (n > K) throw Error(ErrorKind::OutOfRange, "beta_update: n > K");
  return BetaParams::make(b.alpha + n, b.beta + static_cast<long>(K - n));
}

Rational beta_succession_mean(const BetaParams& b, unsigned K, unsigned n) {
  if (n > K) throw Error(ErrorKind::OutOfRange, "beta_succession_mean: n > K");
  return make_rational(b.alpha + static_cast<long>(n), b.alpha + b.beta + static_cast<long>(K));
}

DirichletParams DirichletParams::make(Multiset<Point> psi) {
  auto base = psi.support();
  return make(std::move(psi), std::move(base));
}

DirichletParams DirichletParams::make(Multiset<Point> psi, std::vector<Point> base) {
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  if (base.empty()) throw Error(ErrorKind::WrongSpace, "Dirichlet parameter over an empty base");
  for (const auto& x : base) {
    if (psi(x) == 0) throw Error(ErrorKind::OutOfRange, "Dirichlet parameter lacks full support at " + to_ket_label(x));
  }
  for (const auto& [x, n] : psi) {
    if (!std::binary_search(base.begin(), base.end(), x))
      throw Error(ErrorKind::WrongSpace, "Dirichlet parameter has point outside its base");
  }
  return DirichletParams(std::move(psi), std::move(base));
}

DirichletParams DirichletParams::uniform(std::vector<Point> base) {
  Multiset<Point> psi;
  for (const auto& x : base) psi.add(x, 1);
  return make(std::move(psi), std::move(base));
}

DirichletParams dirichlet_update(const DirichletParams& d, const Multiset<Point>& phi) {
  for (const auto& [x, n] : phi) {
    if (!std::binary_search(d.base().begin(), d.base().end(), x))
      throw Error(ErrorKind::WrongSpace, "observation " + to_ket_label(x) + " outside the Dirichlet base");
  }
  return DirichletParams::make(d.psi() + phi, d.base());
}

PDist<Rational> dirichlet_succession_mean(const DirichletParams& d, const Multiset<Point>& phi) {
  return dirichlet_update(d, phi).mean();
}

PDist<Rational> bivbin_dirichlet_mean(const DirichletParams& d, unsigned K, unsigned n1, unsigned n2) {
  check_observation(K, n1, n2);
  Multiset<Point> total;
  for (const auto& phi : fiber(K, n1, n2)) total += dirichlet_update(d, phi).psi();
  return flrn<Rational>(total);
}

Rational dirichlet_multinomial_pmf(const Multiset<Point>& psi, const Multiset<Point>& phi) {
  Integer num = mset_coefficient(phi);
  for (const auto& [x, n] : phi) num *= rising(Integer(static_cast<unsigned long>(psi(x))), static_cast<unsigned>(n));
  const Integer den = rising(Integer(static_cast<unsigned long>(psi.size())), static_cast<unsigned>(phi.size()));
  return make_rational(num, den);
}

PDist<Rational> bivbin_dirichlet_mean_oracle(const DirichletParams& d, unsigned K, unsigned n1, unsigned n2) {
  check_observation(K, n1, n2);
  PDist<Rational>::Map acc;
  for (const auto& phi : fiber(K, n1, n2)) {
    const Rational w = dirichlet_multinomial_pmf(d.psi(), phi);
    for (const auto& [x, v] : dirichlet_succession_mean(d, phi)) acc[x] += w * v;
  }
  return PDist<Rational>::normalize(std::move(acc));
}

PoissonParams PoissonParams::make(double lambda) {
  check_rate(lambda);
  const double m = std::ceil(lambda + 12.0 * std::sqrt(lambda) + 12.0);
  return make(lambda, std::max(60u, static_cast<unsigned>(m)));
}

PoissonParams PoissonParams::make(double lambda, unsigned truncation) {
  check_rate(lambda);
  double mass = 0.0;
  for (unsigned k = 0; k <= truncation; ++k) mass += poisson_pmf(lambda, k);
  if (mass < 1.0 - 1e-9) throw Error(ErrorKind::OutOfRange, "Poisson truncation too small for rate");
  return PoissonParams{lambda, truncation};
}

double poisson_pmf(double lambda, unsigned k) {
  check_rate(lambda);
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

double binomial_poisson_mean(double r, double lambda, unsigned n) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::OutOfRange, "detection probability outside [0,1]");
  check_rate(lambda);
  return n + (1.0 - r) * lambda;
}

double bivbin_poisson_mean(const Coin<double>& gamma, double lambda, unsigned n1, unsigned n2) {
  if (gamma.dim() != 2) throw Error(ErrorKind::WrongSpace, "bivbin_poisson_mean: needs a two-coin");
  check_rate(lambda);
  const double g00 = gamma({0, 0});
  // lo <= hi; `side` is the single-coordinate corner on the side of hi.
  const unsigned lo = std::min(n1, n2), hi = std::max(n1, n2);
  const double g_side = n1 <= n2 ? gamma({0, 1}) : gamma({1, 0});
  const double g_other = n1 <= n2 ? gamma({1, 0}) : gamma({0, 1});
  const double g11 = gamma({1, 1});
  double num = 0.0, den = 0.0;
  for (unsigned i = 0; i <= lo; ++i) {
    const double ppp =
        poisson_pmf(g_side * lambda, hi - lo + i) * poisson_pmf(g_other * lambda, i) * poisson_pmf(g11 * lambda, lo - i);
    num += ppp * i;
    den += ppp;
  }
  if (den <= 0.0) throw Error(ErrorKind::DegenerateObservation, "observation impossible under the given coin and rate");
  return hi + g00 * lambda + num / den;
}

double truncated_dagger_mean(const std::function<double(unsigned)>& likelihood, const PoissonParams& prior) {
  double num = 0.0, den = 0.0;
  for (unsigned k = 0; k <= prior.truncation; ++k) {
    const double w = poisson_pmf(prior.lambda, k) * likelihood(k);
    num += k * w;
    den += w;
  }
  if (den < 1e-300) throw Error(ErrorKind::DegenerateObservation, "observation has no mass under the truncated prior");
  return num / den;
}

double truncated_dagger_mean(const std::function<PDist<double>(unsigned)>& chan, const PoissonParams& prior,
                             const Point& observation) {
  return truncated_dagger_mean([&](unsigned k) { return chan(k)(observation); }, prior);
}

}  // namespace bitoss
