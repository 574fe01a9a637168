// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "bitoss/em.hpp"
#include "bitoss/json_io.hpp"
#include "properties.hpp"

#ifndef BITOSS_CLI_PATH
#define BITOSS_CLI_PATH "bitoss"
#endif

namespace {

using namespace bitoss;
using testing::Check;

struct Outcome {
  bool ok;
  std::string detail;
};

Outcome from(const Check& c, const std::string& summary) {
  if (!c.ok) return {false, c.detail};
  return {true, summary + " (" + std::to_string(c.cases) + " cases)"};
}

Outcome all_of(std::initializer_list<std::pair<Check, std::string>> parts) {
  long cases = 0;
  std::string names;
  for (const auto& [c, name] : parts) {
    if (!c.ok) return {false, name + ": " + c.detail};
    cases += c.cases;
    names += (names.empty() ? "" : ", ") + name;
  }
  return {true, names + " (" + std::to_string(cases) + " cases)"};
}

std::string fmt(double v, const char* f = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// criteria -----------------------------------------------------------------

Outcome c1() { return from(testing::check_example_multinomial_and_grid(), "10 multinomial + 9 grid values exact"); }

Outcome c2() {
  return all_of({{testing::check_heads_coefficient_sums(5, 1), "N=1"},
                 {testing::check_heads_coefficient_sums(5, 2), "N=2"},
                 {testing::check_heads_coefficient_sums(5, 3), "N=3"},
                 {testing::check_vandermonde(8), "Vandermonde B,G<=8"}});
}

Outcome c3() {
  std::mt19937_64 rng(301);
  return from(testing::check_marginal_and_tensor_laws(rng, 50, 6), "marginal and tensor laws, 50 coins, K<=6");
}

Outcome c4() {
  std::mt19937_64 rng(401);
  return from(testing::check_convolution_closure(rng, 20, 6), "K+L<=6 closure and K-fold convolution, 20 coins");
}

Outcome c5() {
  std::mt19937_64 rng(501);
  return from(testing::check_moment_scaling(rng, 50, 6), "mean/var/cov scale by K, 50 coins, K<=6");
}

Outcome c6() {
  long alt = 0;
  const auto c = testing::check_binomial_variance(8, &alt);
  if (!c.ok) return {false, c.detail};
  return {true, "var = K r (1-r) in all " + std::to_string(c.cases) +
                    " cases; the printed K(K-1)r agrees in only " + std::to_string(alt) + " (all K=0)"};
}

Outcome c7() {
  std::mt19937_64 rng(701);
  return from(testing::check_recover_round_trip(rng, 100, 8), "recover(bivbin[K](g), K) = g, 100 coins, K=1..8");
}

Outcome c8() {
  std::mt19937_64 rng(801);
  return all_of({{testing::check_direct_vs_functorial(rng, 50, 8), "direct = functorial (50 coins, K<=8)"},
                 {testing::check_fiber_brute_force(6), "fiber = brute force (K<=6)"}});
}

Outcome c9() {
  std::mt19937_64 rng(901);
  return from(testing::check_multinomial_moments(rng, 6, 4), "multiset moment identities, K<=6, |X|<=4");
}

Outcome c10() {
  std::mt19937_64 rng(1001);
  double w1 = 0, w2 = 0;
  const auto laplace = testing::check_laplace_rule(100);
  const auto binom = testing::check_binomial_poisson(1e-6, &w1);
  const auto biv = testing::check_bivbin_poisson(rng, 8, 1e-6, &w2);
  auto o = all_of({{laplace, "Laplace (K+1)/(K+2)"}, {binom, "binomial-Poisson"}, {biv, "bivbin-Poisson"}});
  if (o.ok) o.detail += "; max |diff| " + fmt(w1) + " / " + fmt(w2);
  return o;
}

Outcome c11() {
  Check singleton, symmetric;
  std::mt19937_64 rng(1101);
  std::uniform_int_distribution<int> w(1, 6);
  std::vector<DirichletParams> params;
  for (std::uint64_t c = 1; c <= 3; ++c) params.push_back(testing::constant_psi(c));
  for (int t = 0; t < 10; ++t) {
    Multiset<Point> psi;
    for (const auto& x : bit_tuples(2)) psi.add(x, w(rng));
    params.push_back(DirichletParams::make(psi));
  }
  for (const auto& d : params) {
    const auto s = testing::check_fiber_sum_vs_weighted(d, 4, testing::singleton_fiber);
    singleton.cases += s.cases;
    if (!s.ok) singleton.fail(s.detail);
  }
  for (std::uint64_t c = 1; c <= 3; ++c) {
    const auto s = testing::check_fiber_sum_vs_weighted(testing::constant_psi(c), 4, [](auto...) { return true; });
    symmetric.cases += s.cases;
    if (!s.ok) symmetric.fail(s.detail);
  }
  // General case: executed and reported only.
  long general = 0, differ = 0;
  for (std::size_t i = 3; i < params.size(); ++i) {
    const auto s = testing::check_fiber_sum_vs_weighted(params[i], 4, [](auto...) { return true; });
    general += s.cases;
    for (unsigned K = 0; K <= 4; ++K)
      for (unsigned n1 = 0; n1 <= K; ++n1)
        for (unsigned n2 = 0; n2 <= K; ++n2)
          if (bivbin_dirichlet_mean(params[i], K, n1, n2) != bivbin_dirichlet_mean_oracle(params[i], K, n1, n2))
            ++differ;
  }
  const std::string general_note =
      "; general psi: " + std::to_string(differ) + "/" + std::to_string(general) + " cells differ";
  if (!singleton.ok) return {false, "singleton fiber: " + singleton.detail + general_note};
  if (!symmetric.ok) return {false, "symmetric psi: " + symmetric.detail + general_note};
  return {true, "singleton (" + std::to_string(singleton.cases) + ") and symmetric (" +
                    std::to_string(symmetric.cases) + ") cases agree" + general_note};
}

Outcome c12() {
  const unsigned K = 15;
  const auto data = sample(testing::mixture_grid(K), 1000, 42);
  EMOptions opt;
  opt.iterations = 10;
  opt.seed = 7;
  const auto trace = em_run(data, 2, K, opt);
  const auto truth = std::vector<Coin<double>>{Coin<double>::make(to_float(testing::example_gamma().dist())),
                                               Coin<double>::make(to_float(testing::mixture_gamma1().dist()))};
  const double kl = trace.back().kl;
  const double err = coins_linf_up_to_permutation(trace.back().state.coins, truth);
  std::string t;
  for (const auto& r : trace) t += (t.empty() ? "" : " ") + fmt(r.kl, "%.3f");
  const bool ok = kl <= 0.15 && err <= 0.05;
  return {ok, "final KL " + fmt(kl) + " (<= 0.15), coin L-inf " + fmt(err) + " (<= 0.05); trace " + t};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c13() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bitoss_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_text_file((dir / "mix.json").string(), dump(dist_to_json(testing::mixture_grid(15))));
  const std::string exe = BITOSS_CLI_PATH;
  auto sh = [&](const std::string& args) {
    const std::string cmd = "\"" + exe + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  auto p = [&](const char* name) { return "\"" + (dir / name).string() + "\""; };
  std::string why;
  for (const char* tag : {"1", "2"}) {
    const std::string t(tag);
    if (sh("sample --dist " + p("mix.json") + " --n 1000 --seed 42 --out " + p(("d" + t + ".json").c_str())) != 0)
      why = "sample failed";
    if (sh("em --data " + p("d1.json") + " --K 15 --classes 2 --iters 5 --seed 7 --out " +
           p(("s" + t + ".json").c_str()) + " --trace " + p(("t" + t + ".csv").c_str()) + " --trace-json " +
           p(("j" + t + ".json").c_str())) != 0)
      why = "em failed";
  }
  for (const char* f : {"d", "s", "t", "j"}) {
    const std::string ext = std::string(f) == "t" ? ".csv" : ".json";
    const auto a = slurp(dir / (std::string(f) + "1" + ext));
    const auto b = slurp(dir / (std::string(f) + "2" + ext));
    if (a.empty() || a != b) why += std::string(why.empty() ? "" : "; ") + f + "*" + ext + " differs or is empty";
  }
  fs::remove_all(dir);
  if (!why.empty()) return {false, why};
  return {true, "sample and em outputs byte-identical across two runs of " + fs::path(exe).filename().string()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Two-toss example coin: multinomial and grid exact", 1, c1},
      {2, "Heads-fiber coefficient sums equal binomial products", 30, c2},
      {3, "Marginal and tensor laws", 30, c3},
      {4, "Closure under convolution", 60, c4},
      {5, "Moments scale with K", 30, c5},
      {6, "Binomial variance K r (1-r)", 0, c6},
      {7, "Recover round trip", 30, c7},
      {8, "Oracle equivalence", 60, c8},
      {9, "Multinomial moment identities", 60, c9},
      {10, "Succession rules vs truncated dagger", 120, c10},
      {11, "Dirichlet fiber-sum rule vs weighted posterior", 0, c11},
      {12, "EM end-to-end on the two-component mixture", 60, c12},
      {13, "CLI determinism", 0, c13},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.ok = false;
      o.detail += "; took " + fmt(secs) + " s, limit " + fmt(c.limit_s) + " s";
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " [" << fmt(secs, "%.2f")
              << " s] " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
