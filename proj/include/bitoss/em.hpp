#pragma once

// Expectation Maximisation for mixtures of bivariate binomials. The E-step is
// a Jeffrey update through the dagger of the mixture channel; the M-step takes
// the double dagger with the data as prior and projects each class back onto
// a bivariate binomial via moment recovery.

#include <cstdint>
#include <optional>
#include <vector>

#include "bitoss/binomials.hpp"
#include "bitoss/channel.hpp"
#include "bitoss/dist.hpp"

namespace bitoss {

/// Full-support floor for predictions, coins and mixture weights.
inline constexpr double kEmFloor = 1e-9;

struct EMState {
  unsigned K = 0;
  PDist<double> mixture;             // over class labels {0}, ..., {C-1}
  std::vector<Coin<double>> coins;   // one two-coin per class

  std::size_t classes() const { return coins.size(); }
};

struct EMRecord {
  unsigned iteration = 0;
  double kl = 0.0;
  EMState state;
  unsigned clamped = 0;  // recoveries clamped while producing this state
};

using EMTrace = std::vector<EMRecord>;

struct EMOptions {
  unsigned iterations = 5;
  std::uint64_t seed = 0;
  /// Stop once |ΔKL| drops below this; disabled when unset.
  std::optional<double> early_stop;
};

/// Mixes p toward uniform so every entry is at least `floor`:
/// p ↦ floor + (1 − n·floor)·p over the listed points, applied only when some
/// entry is below the floor.
PDist<double> floor_dist(const PDist<double>& p, const std::vector<Point>& points, double floor = kEmFloor);

/// bivbin[K](coin) plus δ on every grid cell, renormalized.
PDist<double> floored_prediction(unsigned K, const Coin<double>& coin, double floor = kEmFloor);

/// The mixture channel class ↦ floored bivbin[K](coin).
Channel<Point, Point, double> mixture_channel(const EMState& state);

/// push(mixture_channel, mixture).
PDist<double> em_prediction(const EMState& state);

/// KL(data ‖ prediction).
double em_divergence(const EMState& state, const PDist<double>& data_dist);

/// Random mixture and coins from CounterRng(seed), all entries >= δ.
EMState em_init(unsigned classes, unsigned K, std::uint64_t seed);

/// One iteration via dense arrays; per-class and per-cell work runs under
/// OpenMP. `clamped`, when given, receives the number of clamped recoveries.
EMState em_step(const EMState& state, const PDist<double>& data_dist, unsigned* clamped = nullptr);

/// One iteration written directly with Channel push/dagger; serial reference.
EMState em_step_reference(const EMState& state, const PDist<double>& data_dist, unsigned* clamped = nullptr);

/// Runs `options.iterations` steps from `init`, recording the divergence
/// before each step and after the last.
EMTrace em_run_from(EMState init, const Multiset<Point>& data, const EMOptions& options);

/// em_run_from(em_init(classes, K, seed), ...).
EMTrace em_run(const Multiset<Point>& data, unsigned classes, unsigned K, const EMOptions& options);

/// Relabels classes: result class i is input class perm[i].
EMState permute_classes(const EMState& state, const std::vector<std::size_t>& perm);

/// Smallest L∞ distance between coin lists over all class permutations.
double coins_linf_up_to_permutation(const std::vector<Coin<double>>& found, const std::vector<Coin<double>>& truth);

}  // namespace bitoss
