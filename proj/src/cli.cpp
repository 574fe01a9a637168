#include "bitoss/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "bitoss/succession.hpp"

namespace bitoss::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ResourceLimit: return kResource;
    case ErrorKind::SupportMismatch: return kSupport;
    default: return kUsage;
  }
}

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorKind::Parse, what); }

template <class S>
Coin<S> coin_of(PDist<S> d) {
  return Coin<S>::make(std::move(d));
}

json rational_mean(const PDist<Rational>& d) {
  json entries = json::array();
  for (const auto& [p, v] : d) entries.push_back({{"point", point_to_json(p)}, {"p", to_string(v)}});
  return entries;
}

Multiset<Point> two_by_two_counts(const std::string& csv) {
  std::vector<long> counts;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 0) usage("counts must be natural numbers: " + csv);
      counts.push_back(v);
    } catch (const std::logic_error&) {
      usage("counts must be natural numbers: " + csv);
    }
  }
  if (counts.size() != 4) usage("expected four counts for 00,01,10,11: " + csv);
  Multiset<Point> m;
  const auto pts = bit_tuples(2);
  for (std::size_t i = 0; i < 4; ++i) m.add(pts[i], static_cast<std::uint64_t>(counts[i]));
  return m;
}

template <class T>
T param(const json& req, const char* name) {
  if (!req.contains(name)) usage(std::string("succession: missing parameter \"") + name + "\"");
  try {
    return req.at(name).get<T>();
  } catch (const json::exception&) {
    usage(std::string("succession: bad parameter \"") + name + "\"");
  }
}

unsigned natural(const json& req, const char* name) {
  const auto v = param<long long>(req, name);
  if (v < 0) usage(std::string("succession: \"") + name + "\" must be >= 0");
  return static_cast<unsigned>(v);
}

// bivbin -------------------------------------------------------------------

struct BivbinArgs {
  std::string coin;
  unsigned K = 0;
  std::optional<unsigned> n;
  std::string out;
  std::optional<std::string> csv;
};

template <class S>
void emit_grid(const BivbinArgs& a, const Coin<S>& coin) {
  if (a.n && *a.n != coin.dim())
    usage("--n " + std::to_string(*a.n) + " does not match coin dimension " + std::to_string(coin.dim()));
  const auto grid = mvbin(a.K, coin);
  write_text_file(a.out, dump(grid_to_json(grid)));
  if (a.csv) write_text_file(*a.csv, grid_csv(grid));
}

void cmd_bivbin(const BivbinArgs& a) {
  auto d = dist_from_json(read_json_file(a.coin));
  if (d.index() == 0)
    emit_grid(a, coin_of(std::get<0>(std::move(d))));
  else
    emit_grid(a, coin_of(std::get<1>(std::move(d))));
}

// sample -------------------------------------------------------------------

struct SampleArgs {
  std::string dist;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_sample(const SampleArgs& a) {
  const auto d = dist_from_json(read_json_file(a.dist));
  const auto phi = std::visit([&](const auto& omega) { return sample(omega, a.n, a.seed); }, d);
  write_text_file(a.out, dump(multiset_to_json(phi)));
}

// em -----------------------------------------------------------------------

struct EmArgs {
  std::string data;
  unsigned K = 0;
  unsigned classes = 0;
  unsigned iters = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
  std::optional<std::string> trace_json;
  std::optional<double> early_stop;
};

void cmd_em(const EmArgs& a) {
  if (a.iters == 0) usage("--iters must be at least 1");
  if (a.classes == 0) usage("--classes must be at least 1");
  if (a.K == 0) usage("--K must be at least 1");
  const auto data = multiset_from_json(read_json_file(a.data));
  if (data.empty()) usage("data multiset is empty");
  for (const auto& [p, n] : data) {
    if (p.size() != 2 || p[0] < 0 || p[1] < 0 || p[0] > static_cast<int>(a.K) || p[1] > static_cast<int>(a.K))
      throw Error(ErrorKind::SupportMismatch, "data point " + to_ket_label(p) + " outside the (K+1)^2 grid");
  }
  EMOptions opt;
  opt.iterations = a.iters;
  opt.seed = a.seed;
  opt.early_stop = a.early_stop;
  const auto trace = em_run(data, a.classes, a.K, opt);
  json final_state = em_state_to_json(trace.back().state);
  final_state["kl"] = trace.back().kl;
  write_text_file(a.out, dump(final_state));
  write_text_file(a.trace, em_trace_csv(trace));
  if (a.trace_json) write_text_file(*a.trace_json, dump(em_trace_to_json(trace)));
}

// recover ------------------------------------------------------------------

struct RecoverArgs {
  std::string grid;
  unsigned K = 0;
  bool clamp = false;
};

template <class S>
json recover_report(const PDist<S>& sigma, unsigned K, bool clamp) {
  Recovered<S> rec;
  try {
    rec = recover(sigma, K, clamp ? RecoverPolicy::clamp : RecoverPolicy::strict);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OutOfRange) throw Failure{kInfeasible, e.what()};
    throw;
  }
  // How far sigma is from the bivariate binomial of the recovered coin.
  const auto refit = bivbin_direct(K, rec.coin);
  double residual = 0.0;
  bool exact = true;
  for (const auto& y : grid_points(K, 2)) {
    const S diff = sigma(y) - refit(y);
    residual = std::max(residual, std::abs(NumTraits<S>::to_double(diff)));
    if (!NumTraits<S>::is_zero(diff)) exact = false;
  }
  const bool fits = NumTraits<S>::exact ? exact : residual <= 1e-9;
  return {{"coin", dist_to_json(rec.coin.dist())},
          {"clamped", rec.clamped},
          {"is_bivariate_binomial", fits},
          {"max_residual", residual}};
}

json cmd_recover(const RecoverArgs& a) {
  if (a.K == 0) usage("--K must be at least 1");
  const auto d = dist_from_json(read_json_file(a.grid));
  return std::visit([&](const auto& sigma) { return recover_report(sigma, a.K, a.clamp); }, d);
}

// succession ---------------------------------------------------------------

struct SuccessionArgs {
  std::optional<std::string> request;
  std::optional<std::string> rule;
  std::optional<long long> alpha, beta, K, n, n1, n2;
  std::optional<double> r, lambda;
  std::optional<std::string> psi, phi, coin;
};

json request_from_flags(const SuccessionArgs& a) {
  if (a.request) {
    json req = read_json_file(*a.request);
    if (a.rule) req["rule"] = *a.rule;
    return req;
  }
  if (!a.rule) usage("succession needs --rule or --request");
  json req{{"rule", *a.rule}};
  auto put = [&req](const char* key, const auto& opt) {
    if (opt) req[key] = *opt;
  };
  put("alpha", a.alpha);
  put("beta", a.beta);
  put("K", a.K);
  put("n", a.n);
  put("n1", a.n1);
  put("n2", a.n2);
  put("r", a.r);
  put("lambda", a.lambda);
  if (a.psi) req["psi"] = multiset_to_json(two_by_two_counts(*a.psi));
  if (a.phi) req["phi"] = multiset_to_json(two_by_two_counts(*a.phi));
  if (a.coin) req["coin"] = read_json_file(*a.coin);
  return req;
}

}  // namespace

json evaluate_succession(const json& req) {
  const auto rule = param<std::string>(req, "rule");
  json result{{"rule", rule}};
  if (rule == "beta") {
    const auto b = BetaParams::make(param<long>(req, "alpha"), param<long>(req, "beta"));
    const unsigned K = natural(req, "K");
    const unsigned n = natural(req, "n");
    const auto post = beta_update(b, K, n);
    result["posterior"] = {{"alpha", post.alpha}, {"beta", post.beta}};
    result["mean"] = to_string(beta_succession_mean(b, K, n));
  } else if (rule == "dirichlet") {
    const auto psi = multiset_from_json(param<json>(req, "psi"));
    const auto phi = req.contains("phi") ? multiset_from_json(req.at("phi")) : Multiset<Point>{};
    const auto d = DirichletParams::make(psi);
    result["posterior"] = multiset_to_json(dirichlet_update(d, phi).psi());
    result["mean"] = rational_mean(dirichlet_succession_mean(d, phi));
  } else if (rule == "bivbin-dirichlet") {
    const auto d = DirichletParams::make(multiset_from_json(param<json>(req, "psi")), bit_tuples(2));
    const unsigned K = natural(req, "K"), n1 = natural(req, "n1"), n2 = natural(req, "n2");
    const auto stated = bivbin_dirichlet_mean(d, K, n1, n2);
    const auto oracle = bivbin_dirichlet_mean_oracle(d, K, n1, n2);
    result["mean"] = rational_mean(stated);
    result["weighted_posterior_mean"] = rational_mean(oracle);
    result["agrees"] = stated == oracle;
  } else if (rule == "poisson-binomial") {
    result["mean"] = binomial_poisson_mean(param<double>(req, "r"), param<double>(req, "lambda"), natural(req, "n"));
  } else if (rule == "poisson-bivbin") {
    auto d = dist_from_json(param<json>(req, "coin"));
    const auto coin = Coin<double>::make(d.index() == 0 ? to_float(std::get<0>(d)) : std::get<1>(std::move(d)));
    result["mean"] = bivbin_poisson_mean(coin, param<double>(req, "lambda"), natural(req, "n1"), natural(req, "n2"));
  } else {
    usage("unknown succession rule \"" + rule + "\"");
  }
  return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bivariate binomial toolkit"};
  app.require_subcommand(1);
  std::function<void()> action;

  BivbinArgs bivbin;
  auto* sub_bivbin = app.add_subcommand("bivbin", "Build the bivariate (multivariate) binomial grid of a coin");
  sub_bivbin->add_option("--coin", bivbin.coin, "Coin distribution JSON")->required();
  sub_bivbin->add_option("--K", bivbin.K, "Toss count")->required();
  sub_bivbin->add_option("--n", bivbin.n, "Expected coin dimension N");
  sub_bivbin->add_option("--out", bivbin.out, "Grid JSON output")->required();
  sub_bivbin->add_option("--csv", bivbin.csv, "Grid CSV output");
  sub_bivbin->callback([&] { action = [&] { cmd_bivbin(bivbin); }; });

  SampleArgs smp;
  auto* sub_sample = app.add_subcommand("sample", "Draw a multiset of samples from a distribution");
  sub_sample->add_option("--dist", smp.dist, "Distribution JSON")->required();
  sub_sample->add_option("--n", smp.n, "Number of draws")->required();
  sub_sample->add_option("--seed", smp.seed, "Generator seed")->required();
  sub_sample->add_option("--out", smp.out, "Multiset JSON output")->required();
  sub_sample->callback([&] { action = [&] { cmd_sample(smp); }; });

  EmArgs em;
  auto* sub_em = app.add_subcommand("em", "Fit a mixture of bivariate binomials");
  sub_em->add_option("--data", em.data, "Data multiset JSON")->required();
  sub_em->add_option("--K", em.K, "Toss count")->required();
  sub_em->add_option("--classes", em.classes, "Number of mixture components")->required();
  sub_em->add_option("--iters", em.iters, "Iterations")->required();
  sub_em->add_option("--seed", em.seed, "Initialisation seed")->required();
  sub_em->add_option("--out", em.out, "Final state JSON output")->required();
  sub_em->add_option("--trace", em.trace, "Divergence trace CSV output")->required();
  sub_em->add_option("--trace-json", em.trace_json, "Full trace JSON output");
  sub_em->add_option("--early-stop", em.early_stop, "Stop once |dKL| falls below this");
  sub_em->callback([&] { action = [&] { cmd_em(em); }; });

  SuccessionArgs suc;
  auto* sub_suc = app.add_subcommand("succession", "Evaluate a rule of succession");
  sub_suc->add_option("--request", suc.request, "Request JSON {\"rule\": ..., params}");
  sub_suc->add_option("--rule", suc.rule, "beta | dirichlet | bivbin-dirichlet | poisson-binomial | poisson-bivbin");
  sub_suc->add_option("--alpha", suc.alpha);
  sub_suc->add_option("--beta", suc.beta);
  sub_suc->add_option("--K", suc.K);
  sub_suc->add_option("--n", suc.n);
  sub_suc->add_option("--n1", suc.n1);
  sub_suc->add_option("--n2", suc.n2);
  sub_suc->add_option("--r", suc.r);
  sub_suc->add_option("--lambda", suc.lambda);
  sub_suc->add_option("--psi", suc.psi, "Dirichlet counts over 2x2 as a,b,c,d (order 00,01,10,11)");
  sub_suc->add_option("--phi", suc.phi, "Observed counts over 2x2 as a,b,c,d");
  sub_suc->add_option("--coin", suc.coin, "Two-coin distribution JSON");
  sub_suc->callback([&] { action = [&] { out << dump(evaluate_succession(request_from_flags(suc))); }; });

  RecoverArgs rec;
  auto* sub_rec = app.add_subcommand("recover", "Recover the two-coin of a bivariate binomial grid");
  sub_rec->add_option("--grid", rec.grid, "Grid distribution JSON")->required();
  sub_rec->add_option("--K", rec.K, "Toss count")->required();
  sub_rec->add_flag("--clamp", rec.clamp, "Clamp infeasible entries instead of failing");
  sub_rec->callback([&] { action = [&] { out << dump(cmd_recover(rec)); }; });

  std::vector<const char*> argv{"bitoss"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    action();
    return kOk;
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

}  // namespace bitoss::cli
