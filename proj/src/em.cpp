#include "bitoss/em.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace bitoss {

namespace {

const std::vector<Point>& corners() {
  static const std::vector<Point> c = bit_tuples(2);
  return c;
}

Point label(std::size_t x) { return Point{static_cast<int>(x)}; }

std::vector<Point> labels(std::size_t n) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(label(i));
  return out;
}

Coin<double> floor_coin(const Coin<double>& c) { return Coin<double>::make(floor_dist(c.dist(), corners())); }

void check_state(const EMState& s) {
  if (s.coins.empty()) throw Error(ErrorKind::OutOfRange, "EM state without classes");
  for (const auto& c : s.coins) {
    if (c.dim() != 2) throw Error(ErrorKind::WrongSpace, "EM coins must be two-coins");
  }
}

void check_data(const PDist<double>& data, unsigned K) {
  for (const auto& [y, v] : data) {
    if (y.size() != 2 || y[0] < 0 || y[1] < 0 || y[0] > static_cast<int>(K) || y[1] > static_cast<int>(K))
      throw Error(ErrorKind::SupportMismatch, "data point " + to_ket_label(y) + " has no predicted mass");
  }
}

// Mixes the (normalized) values toward uniform so that each is at least
// `floor`; values that already clear the floor are left untouched.
template <class It>
void apply_floor(It first, It last, double floor) {
  const double n = static_cast<double>(last - first);
  double total = 0.0, lo = 1.0;
  for (It it = first; it != last; ++it) total += *it, lo = std::min(lo, *it);
  for (It it = first; it != last; ++it) *it /= total;
  if (lo / total >= floor) return;
  const double scale = 1.0 - n * floor;
  for (It it = first; it != last; ++it) *it = floor + scale * *it;
}

std::size_t cell_index(const Point& y, unsigned K) { return static_cast<std::size_t>(y[0]) * (K + 1) + y[1]; }

}  // namespace

PDist<double> floor_dist(const PDist<double>& p, const std::vector<Point>& points, double floor) {
  std::vector<double> v;
  for (const auto& x : points) v.push_back(p(x));
  apply_floor(v.begin(), v.end(), floor);
  PDist<double>::Map m;
  for (std::size_t i = 0; i < points.size(); ++i) m.emplace(points[i], v[i]);
  return PDist<double>::normalize(std::move(m));
}

PDist<double> floored_prediction(unsigned K, const Coin<double>& coin, double floor) {
  const auto grid = bivbin_direct(K, coin);
  PDist<double>::Map m;
  for (const auto& y : grid_points(K, 2)) m.emplace(y, grid(y) + floor);
  return PDist<double>::normalize(std::move(m));
}

Channel<Point, Point, double> mixture_channel(const EMState& state) {
  check_state(state);
  Channel<Point, Point, double>::Kernel k;
  for (std::size_t x = 0; x < state.classes(); ++x) k.emplace(label(x), floored_prediction(state.K, state.coins[x]));
  return Channel<Point, Point, double>(std::move(k));
}

PDist<double> em_prediction(const EMState& state) { return push(mixture_channel(state), state.mixture); }

double em_divergence(const EMState& state, const PDist<double>& data_dist) {
  return kl_divergence(data_dist, em_prediction(state));
}

EMState em_init(unsigned classes, unsigned K, std::uint64_t seed) {
  if (classes == 0) throw Error(ErrorKind::OutOfRange, "em_init: need at least one class");
  if (K == 0) throw Error(ErrorKind::OutOfRange, "em_init: K must be at least 1");
  CounterRng rng(seed);
  auto draw = [&rng](const std::vector<Point>& pts) {
    PDist<double>::Map m;
    for (const auto& p : pts) m.emplace(p, 1.0 - rng.uniform());  // (0, 1]
    return floor_dist(PDist<double>::normalize(std::move(m)), pts);
  };
  EMState s;
  s.K = K;
  s.mixture = draw(labels(classes));
  for (unsigned x = 0; x < classes; ++x) s.coins.push_back(Coin<double>::make(draw(corners())));
  return s;
}

EMState em_step_reference(const EMState& state, const PDist<double>& data_dist, unsigned* clamped) {
  check_data(data_dist, state.K);
  const auto chan = mixture_channel(state);
  const auto dag = dagger(chan, state.mixture);
  for (const auto& [y, v] : data_dist) {
    if (!dag.defined_at(y)) throw Error(ErrorKind::SupportMismatch, "data point without predicted mass");
  }
  const auto new_mixture = push(dag, data_dist);
  const auto double_dagger = dagger(dag, data_dist);

  EMState next;
  next.K = state.K;
  unsigned n_clamped = 0;
  for (std::size_t x = 0; x < state.classes(); ++x) {
    const auto rec = recover(double_dagger(label(x)), state.K, RecoverPolicy::clamp);
    n_clamped += rec.clamped ? 1 : 0;
    next.coins.push_back(floor_coin(rec.coin));
  }
  next.mixture = floor_dist(new_mixture, labels(state.classes()));
  if (clamped) *clamped = n_clamped;
  return next;
}

EMState em_step(const EMState& state, const PDist<double>& data_dist, unsigned* clamped) {
  check_state(state);
  check_data(data_dist, state.K);
  const unsigned K = state.K;
  const int C = static_cast<int>(state.classes());
  const std::size_t G = static_cast<std::size_t>(K + 1) * (K + 1);
  const auto cells = grid_points(K, 2);

  // pred[x][y]: floored bivbin of class x.
  std::vector<std::vector<double>> pred(C);
#pragma omp parallel for
  for (int x = 0; x < C; ++x) {
    const auto p = floored_prediction(K, state.coins[x]);
    pred[x].resize(G);
    for (std::size_t y = 0; y < G; ++y) pred[x][y] = p(cells[y]);
  }

  std::vector<double> mix(C);
  for (int x = 0; x < C; ++x) mix[x] = state.mixture(label(x));

  // total[y] = Σ_x mix[x]·pred[x][y], the predicted distribution.
  std::vector<double> total(G, 0.0);
#pragma omp parallel for
  for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(G); ++y) {
    double t = 0.0;
    for (int x = 0; x < C; ++x) t += mix[x] * pred[x][y];
    total[y] = t;
  }

  std::vector<std::size_t> data_cells;
  std::vector<double> data_mass;
  for (const auto& [y, v] : data_dist) {
    const std::size_t i = cell_index(y, K);
    if (!(total[i] > 0.0)) throw Error(ErrorKind::SupportMismatch, "data point without predicted mass");
    data_cells.push_back(i);
    data_mass.push_back(v);
  }

  // Jeffrey update: new_mix[x] = Σ_y data(y)·dagger(y)(x).
  // Double dagger: dd[x][y] ∝ data(y)·dagger(y)(x), normalized per class.
  std::vector<double> new_mix(C, 0.0);
  std::vector<std::array<double, 4>> coin_vals(C);
  std::vector<unsigned char> was_clamped(C, 0);
#pragma omp parallel for
  for (int x = 0; x < C; ++x) {
    std::vector<double> weight(data_cells.size());
    double mass = 0.0;
    for (std::size_t j = 0; j < data_cells.size(); ++j) {
      const std::size_t y = data_cells[j];
      weight[j] = data_mass[j] * mix[x] * pred[x][y] / total[y];
      mass += weight[j];
    }
    new_mix[x] = mass;
    double m1 = 0.0, m2 = 0.0, s12 = 0.0;
    for (std::size_t j = 0; j < data_cells.size(); ++j) {
      const double w = weight[j] / mass;
      const double a = static_cast<double>(data_cells[j] / (K + 1));
      const double b = static_cast<double>(data_cells[j] % (K + 1));
      m1 += w * a;
      m2 += w * b;
      s12 += w * a * b;
    }
    const double k = K;
    const double cov = s12 - m1 * m2;
    std::array<double, 4> g{};
    g[3] = cov / k + m1 * m2 / (k * k);
    g[2] = m1 / k - g[3];
    g[1] = m2 / k - g[3];
    g[0] = 1.0 - g[1] - g[2] - g[3];
    bool c = false;
    for (auto& v : g) {
      if (v < 0.0) v = 0.0, c = true;
      if (v > 1.0) v = 1.0, c = true;
    }
    apply_floor(g.begin(), g.end(), kEmFloor);
    coin_vals[x] = g;
    was_clamped[x] = c ? 1 : 0;
  }

  EMState next;
  next.K = K;
  PDist<double>::Map mm;
  for (int x = 0; x < C; ++x) mm.emplace(label(x), new_mix[x]);
  next.mixture = floor_dist(PDist<double>::normalize(std::move(mm)), labels(C));
  for (int x = 0; x < C; ++x) {
    const auto& g = coin_vals[x];
    PDist<double>::Map cm{{{0, 0}, g[0]}, {{0, 1}, g[1]}, {{1, 0}, g[2]}, {{1, 1}, g[3]}};
    next.coins.push_back(Coin<double>::make(PDist<double>::normalize(std::move(cm))));
  }
  if (clamped) *clamped = static_cast<unsigned>(std::count(was_clamped.begin(), was_clamped.end(), 1));
  return next;
}

EMTrace em_run_from(EMState init, const Multiset<Point>& data, const EMOptions& options) {
  if (options.iterations == 0) throw Error(ErrorKind::OutOfRange, "em_run: iterations must be at least 1");
  const auto data_dist = flrn<double>(data);
  EMTrace trace;
  EMState state = std::move(init);
  unsigned clamped = 0;
  for (unsigned it = 0; it < options.iterations; ++it) {
    const double kl = em_divergence(state, data_dist);
    if (options.early_stop && !trace.empty() && std::abs(trace.back().kl - kl) < *options.early_stop) break;
    trace.push_back(EMRecord{it, kl, state, clamped});
    state = em_step(state, data_dist, &clamped);
  }
  const unsigned last = static_cast<unsigned>(trace.size());
  trace.push_back(EMRecord{last, em_divergence(state, data_dist), std::move(state), clamped});
  return trace;
}

EMTrace em_run(const Multiset<Point>& data, unsigned classes, unsigned K, const EMOptions& options) {
  if (options.iterations == 0) throw Error(ErrorKind::OutOfRange, "em_run: iterations must be at least 1");
  return em_run_from(em_init(classes, K, options.seed), data, options);
}

EMState permute_classes(const EMState& state, const std::vector<std::size_t>& perm) {
  if (perm.size() != state.classes()) throw Error(ErrorKind::OutOfRange, "permutation size mismatch");
  EMState out;
  out.K = state.K;
  PDist<double>::Map m;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    m.emplace(label(i), state.mixture(label(perm[i])));
    out.coins.push_back(state.coins.at(perm[i]));
  }
  out.mixture = PDist<double>::from_map(std::move(m));
  return out;
}

double coins_linf_up_to_permutation(const std::vector<Coin<double>>& found, const std::vector<Coin<double>>& truth) {
  if (found.size() != truth.size()) throw Error(ErrorKind::OutOfRange, "class count mismatch");
  std::vector<std::size_t> perm(found.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (const auto& p : corners()) worst = std::max(worst, std::abs(found[perm[i]](p) - truth[i](p)));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace bitoss
