#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bitoss/em.hpp"
#include "bitoss/json_io.hpp"
#include "testing.hpp"

namespace bitoss {
namespace {

template <class F>
ErrorKind error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Parse;
}

double state_distance(const EMState& a, const EMState& b) {
  double d = testing::linf(a.mixture, b.mixture);
  for (std::size_t i = 0; i < a.coins.size(); ++i) d = std::max(d, testing::linf(a.coins[i].dist(), b.coins[i].dist()));
  return d;
}

void expect_valid(const EMState& s, std::size_t classes) {
  ASSERT_EQ(s.classes(), classes);
  ASSERT_EQ(s.mixture.size(), classes);
  EXPECT_NEAR(s.mixture.total(), 1.0, 1e-9);
  for (const auto& [x, p] : s.mixture) EXPECT_GE(p, kEmFloor * 0.999);
  for (const auto& c : s.coins) {
    ASSERT_EQ(c.dist().size(), 4u);
    EXPECT_NEAR(c.dist().total(), 1.0, 1e-9);
    for (const auto& [x, p] : c.dist()) EXPECT_GE(p, kEmFloor * 0.999);
  }
}

const Multiset<Point>& mixture_samples() {
  static const auto data = sample(testing::mixture_grid(15), 1000, 42);
  return data;
}

const PDist<double>& mixture_data() {
  static const auto d = flrn<double>(mixture_samples());
  return d;
}

TEST(EmInit, Deterministic) {
  EXPECT_EQ(em_state_to_json(em_init(2, 15, 7)), em_state_to_json(em_init(2, 15, 7)));
  EXPECT_NE(em_state_to_json(em_init(2, 15, 7)), em_state_to_json(em_init(2, 15, 8)));
}

TEST(EmInit, Structure) {
  const auto one = em_init(1, 4, 3);
  EXPECT_EQ(one.mixture, PDist<double>::point_mass({0}));
  expect_valid(one, 1);
  const auto two = em_init(2, 15, 7);
  EXPECT_EQ(two.K, 15u);
  expect_valid(two, 2);
  expect_valid(em_init(5, 3, 99), 5);
  EXPECT_EQ(error_of([] { em_init(0, 3, 1); }), ErrorKind::OutOfRange);
  EXPECT_EQ(error_of([] { em_init(2, 0, 1); }), ErrorKind::OutOfRange);
}

TEST(EmFloor, PredictionCoversGrid) {
  const auto corner = Coin<double>::two(1.0, 0.0, 0.0, 0.0);
  const auto p = floored_prediction(3, corner);
  EXPECT_EQ(p.size(), 16u);
  EXPECT_NEAR(p.total(), 1.0, 1e-12);
  for (const auto& [y, v] : p) EXPECT_GT(v, 0.0);
  const auto f = floor_dist(PDist<double>::point_mass({1}), {{0}, {1}}, 0.1);
  EXPECT_NEAR(f({0}), 0.1, 1e-15);
  EXPECT_NEAR(f({1}), 0.9, 1e-15);
}

TEST(EmStep, DenseMatchesReference) {
  std::mt19937_64 rng(31);
  for (unsigned classes : {1u, 2u, 3u}) {
    for (unsigned K : {1u, 4u, 15u}) {
      auto state = em_init(classes, K, 100 + K + classes);
      const auto data = to_float(testing::random_rational_dist(rng, grid_points(K, 2)));
      for (int it = 0; it < 3; ++it) {
        unsigned c1 = 0, c2 = 0;
        const auto a = em_step(state, data, &c1);
        const auto b = em_step_reference(state, data, &c2);
        EXPECT_LT(state_distance(a, b), 1e-12) << "C=" << classes << " K=" << K;
        EXPECT_EQ(c1, c2);
        expect_valid(a, classes);
        state = a;
      }
    }
  }
}

TEST(EmStep, SingleClass) {
  const unsigned K = 6;
  const auto truth = Coin<double>::make(to_float(testing::example_gamma().dist()));
  const auto data = sample(bivbin_direct(K, truth).dist, 500, 5);
  const auto data_dist = flrn<double>(data);
  const auto next = em_step(em_init(1, K, 9), data_dist);
  EXPECT_EQ(next.mixture, PDist<double>::point_mass({0}));
  const auto target = recover(data_dist, K, RecoverPolicy::clamp).coin;
  EXPECT_LT(testing::linf(next.coins[0].dist(), target.dist()), 1e-6);
}

TEST(EmStep, EqualCoinsKeepMixture) {
  auto state = em_init(3, 5, 4);
  state.coins.assign(3, state.coins[0]);
  std::mt19937_64 rng(32);
  const auto data = to_float(testing::random_rational_dist(rng, grid_points(5, 2)));
  EXPECT_LT(testing::linf(em_step(state, data).mixture, state.mixture), 1e-12);
}

TEST(EmStep, JeffreyFixedPoint) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto state = em_init(2, 8, seed);
    const auto pred = em_prediction(state);
    const auto next = em_step(state, pred);
    EXPECT_LT(testing::linf(next.mixture, state.mixture), 1e-9);
    EXPECT_LE(em_divergence(next, pred), 1e-9);
  }
}

TEST(EmStep, ReducesDivergenceOnMixtureData) {
  const auto state = em_init(2, 15, 7);
  const auto next = em_step(state, mixture_data());
  EXPECT_LT(em_divergence(next, mixture_data()), em_divergence(state, mixture_data()));
}

TEST(EmStep, OffGridDataHasNoPrediction) {
  const auto state = em_init(2, 3, 1);
  const auto data = PDist<double>::point_mass({4, 0});
  EXPECT_EQ(error_of([&] { em_step(state, data); }), ErrorKind::SupportMismatch);
  EXPECT_EQ(error_of([&] { em_step_reference(state, data); }), ErrorKind::SupportMismatch);
  EXPECT_EQ(error_of([&] { em_divergence(state, data); }), ErrorKind::SupportMismatch);
}

TEST(EmRun, TraceShape) {
  EMOptions opt;
  opt.iterations = 5;
  opt.seed = 7;
  const auto trace = em_run(mixture_samples(), 2, 15, opt);
  ASSERT_EQ(trace.size(), 6u);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    EXPECT_EQ(trace[i].iteration, i);
    EXPECT_TRUE(std::isfinite(trace[i].kl));
    EXPECT_GE(trace[i].kl, 0.0);
    expect_valid(trace[i].state, 2);
  }
  EXPECT_LT(trace.back().kl, trace.front().kl);
  EXPECT_EQ(em_trace_to_json(trace), em_trace_to_json(em_run(mixture_samples(), 2, 15, opt)));
}

TEST(EmRun, SingleClassOnBivbinData) {
  const auto truth = Coin<double>::make(to_float(testing::mixture_gamma1().dist()));
  const auto data = sample(bivbin_direct(10, truth).dist, 2000, 77);
  EMOptions opt;
  opt.iterations = 1;
  const auto trace = em_run(data, 1, 10, opt);
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_LE(trace[1].kl, trace[0].kl);
  EXPECT_LT(coins_linf_up_to_permutation(trace[1].state.coins, {truth}), 0.02);
}

TEST(EmRun, ZeroIterationsRejected) {
  EMOptions opt;
  opt.iterations = 0;
  EXPECT_EQ(error_of([&] { em_run(mixture_samples(), 2, 15, opt); }), ErrorKind::OutOfRange);
}

TEST(EmRun, EarlyStop) {
  EMOptions opt;
  opt.iterations = 200;
  opt.seed = 7;
  opt.early_stop = 1e-6;
  const auto trace = em_run(mixture_samples(), 2, 15, opt);
  EXPECT_LT(trace.size(), 201u);
  ASSERT_GE(trace.size(), 3u);
  EXPECT_LT(std::abs(trace[trace.size() - 2].kl - trace.back().kl), 1e-6);
}

TEST(EmRun, ClassPermutationCommutes) {
  EMOptions opt;
  opt.iterations = 4;
  const auto init = em_init(2, 15, 11);
  const auto swapped = permute_classes(init, {1, 0});
  const auto a = em_run_from(init, mixture_samples(), opt);
  const auto b = em_run_from(swapped, mixture_samples(), opt);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].kl, b[i].kl, 1e-12);
    EXPECT_LT(state_distance(permute_classes(a[i].state, {1, 0}), b[i].state), 1e-10);
  }
}

TEST(EmRun, PermutationDistance) {
  const auto g0 = Coin<double>::make(to_float(testing::example_gamma().dist()));
  const auto g1 = Coin<double>::make(to_float(testing::mixture_gamma1().dist()));
  EXPECT_EQ(coins_linf_up_to_permutation({g1, g0}, {g0, g1}), 0.0);
  EXPECT_NEAR(coins_linf_up_to_permutation({g0, g0}, {g0, g1}), 0.6 - 0.125, 1e-15);
}

}  // namespace
}  // namespace bitoss
