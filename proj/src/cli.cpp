#include "bcq/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <thread>

#include "bcq/oracle.hpp"
#include "bcq/rng.hpp"
#include "bcq/serialize.hpp"
#include "bcq/theorems.hpp"

namespace bcq::cli {

namespace {

std::vector<std::uint64_t> parse_range(const Json& v, const char* name) {
  std::vector<std::uint64_t> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<std::uint64_t>());
    return out;
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    std::uint64_t lo = v[0].get<std::uint64_t>(), hi = v[1].get<std::uint64_t>();
    if (lo > hi) throw ValidationError(std::string("range for \"") + name + "\" has lo > hi");
    for (std::uint64_t x = lo; x <= hi; ++x) out.push_back(x);
    return out;
  }
  throw ValidationError(std::string("parameter \"") + name +
                        "\" must be an integer or a [lo, hi] pair");
}

std::vector<std::uint64_t> range_of(const Json& params, const char* name) {
  if (!params.contains(name)) {
    throw ValidationError(std::string("missing parameter \"") + name + "\"");
  }
  return parse_range(params.at(name), name);
}

Rat rat_param(const Json& params, const char* name) {
  if (!params.contains(name)) {
    throw ValidationError(std::string("missing parameter \"") + name + "\"");
  }
  const Json& v = params.at(name);
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) return Rat::from_string(v.get<std::string>());
  throw ValidationError(std::string("parameter \"") + name +
                        "\" must be an integer or \"num/den\" string");
}

unsigned effective_precision_budget(const Json& config) {
  if (const char* env = std::getenv("BCQ_PRECISION_BUDGET")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
      throw ValidationError("BCQ_PRECISION_BUDGET must be a positive integer");
    }
    return static_cast<unsigned>(v);
  }
  if (config.contains("precision_budget")) {
    return config.at("precision_budget").get<unsigned>();
  }
  return kDefaultPrecisionBudget;
}

unsigned thread_count(const Json& config) {
  if (config.contains("threads")) return std::max(1u, config.at("threads").get<unsigned>());
  unsigned hw = std::thread::hardware_concurrency();
  return std::min(hw == 0 ? 1u : hw, 4u);
}

// Evaluates independent grid points, possibly concurrently; results land in
// grid order regardless of scheduling.
std::vector<Certificate> run_tasks(const std::vector<std::function<Certificate()>>& tasks,
                                   unsigned threads) {
  std::vector<Certificate> out(tasks.size());
  if (threads <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        out[i] = tasks[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

int exit_code_from(const std::vector<Certificate>& certs) {
  bool any_fail = false, any_undecided = false;
  for (const auto& c : certs) {
    if (c.verdict == Verdict::Fail) any_fail = true;
    if (c.verdict == Verdict::Undecided) any_undecided = true;
  }
  if (any_fail) return kExitFail;
  if (any_undecided) return kExitUndecided;
  return kExitPass;
}

DivergenceRate omega_from(const Json& config) {
  if (!config.contains("rates") || !config.at("rates").contains("omega")) {
    throw ValidationError("config is missing rates.omega");
  }
  return divergence_rate_from_json(config.at("rates").at("omega"));
}

ConvergenceRate phi_from(const Json& config) {
  if (!config.contains("rates") || !config.at("rates").contains("phi")) {
    throw ValidationError("config is missing rates.phi");
  }
  return convergence_rate_from_json(config.at("rates").at("phi"));
}

void validate_omega_or_die(const EventModel& model, const DivergenceRate& omega,
                           std::uint64_t Nmax) {
  const RateCheckResult r = check_divergence_rate(model, omega, Nmax);
  if (!r) {
    throw ValidationError("omega is not a rate of divergence for this model: sum up to omega(" +
                          std::to_string(*r.first_failing_N) + ") is " +
                          r.sum_at_failure.to_string() + " < " +
                          std::to_string(*r.first_failing_N));
  }
}

Index max_ks_omega_arg(const EventModel& model, const std::vector<std::uint64_t>& ms,
                       const std::vector<std::uint64_t>& ls) {
  Index worst = 1;
  for (std::uint64_t m : ms) {
    const Rat s_m = model.sum_stats(m).s;
    for (std::uint64_t l : ls) {
      const Rat arg = s_m * Rat::pow2(static_cast<long>(l) + 2);
      Int c = arg.ceil();
      if (sgn(c) <= 0) continue;
      if (!c.fits_ulong_p()) throw OverflowError("omega argument out of index range");
      worst = std::max(worst, static_cast<Index>(c.get_ui()));
    }
  }
  return worst;
}

Outcome check_outcome(const std::string& theorem, std::vector<Certificate> certs) {
  Json arr = Json::array();
  for (const auto& c : certs) arr.push_back(to_json(c));
  Outcome o;
  o.exit_code = exit_code_from(certs);
  o.output = Json{{"command", "check"}, {"theorem", theorem}, {"certificates", arr}};
  return o;
}

}  // namespace

Outcome run_check(const std::string& theorem, const Json& config) {
  try {
    const TheoremTag tag = theorem_tag_from_string(theorem);
    const Json params = config.contains("params") ? config.at("params") : Json::object();
    const unsigned budget = effective_precision_budget(config);
    const unsigned threads = thread_count(config);

    std::vector<std::function<Certificate()>> tasks;

    if (tag == TheoremTag::KSAlgebra) {
      const Rat a = rat_param(params, "a"), b = rat_param(params, "b");
      const Rat alpha = rat_param(params, "alpha"), beta = rat_param(params, "beta");
      const Rat eps = rat_param(params, "eps");
      tasks.push_back([=] { return ks_algebra_check(a, b, alpha, beta, eps); });
      return check_outcome(theorem, run_tasks(tasks, 1));
    }

    if (!config.contains("model")) throw ValidationError("config is missing \"model\"");
    std::shared_ptr<EventModel> model = model_from_json(config.at("model"));

    switch (tag) {
      case TheoremTag::FirstBC: {
        auto phi = std::make_shared<ConvergenceRate>(phi_from(config));
        const auto ls = range_of(params, "l");
        const auto ms = range_of(params, "m");
        // phi must actually be a rate of convergence over the grid: the sum
        // from phi(l) to the largest m must stay within 2^{-l}.
        for (std::uint64_t l : ls) {
          const Index lo = phi->phi(l);
          const Index mmax = *std::max_element(ms.begin(), ms.end());
          if (mmax <= lo) {
            throw ValidationError("first-bc: m range never exceeds phi(" + std::to_string(l) +
                                  ") = " + std::to_string(lo));
          }
          Rat sum(0);
          for (Index i = lo; i <= mmax; ++i) sum += model->prob(i);
          if (sum > Rat::pow2(-static_cast<long>(l))) {
            throw ValidationError("phi is not a rate of convergence at l = " + std::to_string(l) +
                                  ": tail sum " + sum.to_string() + " > 2^-" + std::to_string(l));
          }
        }
        for (std::uint64_t l : ls) {
          for (std::uint64_t m : ms) {
            if (m <= phi->phi(l)) continue;  // precondition m > phi(l)
            tasks.push_back([=] { return first_bc(*model, *phi, l, m); });
          }
        }
        break;
      }
      case TheoremTag::SecondBC: {
        auto omega = std::make_shared<DivergenceRate>(omega_from(config));
        const auto ns = range_of(params, "n");
        const auto Ns = range_of(params, "N");
        const std::uint64_t Nmax = *std::max_element(ns.begin(), ns.end()) +
                                   *std::max_element(Ns.begin(), Ns.end()) - 1;
        validate_omega_or_die(*model, *omega, Nmax);
        for (std::uint64_t n : ns) {
          for (std::uint64_t N : Ns) {
            tasks.push_back([=] { return second_bc(*model, *omega, n, N, budget); });
          }
        }
        break;
      }
      case TheoremTag::ChungErdos: {
        for (std::uint64_t n : range_of(params, "n")) {
          tasks.push_back([=] { return chung_erdos(*model, n); });
        }
        break;
      }
      case TheoremTag::RatioLowerBound: {
        const Index cap = params.contains("cross_check_cap")
                              ? params.at("cross_check_cap").get<Index>()
                              : kDefaultCountCap;
        for (std::uint64_t n : range_of(params, "n")) {
          tasks.push_back([=] { return ratio_lower_bound(*model, n, cap); });
        }
        break;
      }
      case TheoremTag::BkTail: {
        const auto ks = range_of(params, "k");
        const auto nks = range_of(params, "nk");
        for (std::uint64_t k : ks) {
          for (std::uint64_t nk : nks) {
            tasks.push_back(
                [=] { return bk_tail_check(*model, static_cast<std::int64_t>(k), nk); });
          }
        }
        break;
      }
      case TheoremTag::ErdosRenyi: {
        auto omega = std::make_shared<DivergenceRate>(omega_from(config));
        Json lw = config.contains("rates") && config.at("rates").contains("liminf")
                      ? config.at("rates").at("liminf")
                      : Json{{"kind", "searched"}};
        std::shared_ptr<LiminfWitness> phi{liminf_witness_from_json(lw).release()};
        const auto ns = range_of(params, "n");
        const auto ls = range_of(params, "l");
        validate_omega_or_die(*model, *omega, 2 * *std::max_element(ns.begin(), ns.end()));
        for (std::uint64_t n : ns) {
          for (std::uint64_t l : ls) {
            tasks.push_back([=] { return erdos_renyi(*model, *omega, *phi, n, l); });
          }
        }
        break;
      }
      case TheoremTag::KSTailEstimate: {
        auto omega = std::make_shared<DivergenceRate>(omega_from(config));
        const auto ms = range_of(params, "m");
        const auto ls = range_of(params, "l");
        validate_omega_or_die(*model, *omega, max_ks_omega_arg(*model, ms, ls));
        const bool has_j = params.contains("j");
        const auto js = has_j ? range_of(params, "j") : std::vector<std::uint64_t>{};
        for (std::uint64_t m : ms) {
          for (std::uint64_t l : ls) {
            if (has_j) {
              for (std::uint64_t j : js) {
                tasks.push_back([=] { return ks_tail_estimate(*model, *omega, m, l, j); });
              }
            } else {
              // minimal admissible j
              tasks.push_back([=] {
                const Index j = ks_tail_threshold(*model, *omega, m, l) + 1;
                return ks_tail_estimate(*model, *omega, m, l, j);
              });
            }
          }
        }
        break;
      }
      case TheoremTag::KochenStoneMeta: {
        auto omega = std::make_shared<DivergenceRate>(omega_from(config));
        if (!config.contains("rates") || !config.at("rates").contains("g")) {
          throw ValidationError("config is missing rates.g");
        }
        auto g = std::make_shared<GFunction>(g_function_from_json(config.at("rates").at("g")));
        const auto ms = range_of(params, "m");
        const auto ls = range_of(params, "l");
        validate_omega_or_die(*model, *omega, max_ks_omega_arg(*model, ms, ls));
        for (std::uint64_t m : ms) {
          for (std::uint64_t l : ls) {
            tasks.push_back([=] {
              auto [cert, witness] = kochen_stone_meta(*model, *omega, m, l, *g);
              cert.trace["witness"] = to_json(witness);
              return cert;
            });
          }
        }
        break;
      }
      case TheoremTag::YanRatios: {
        const Rat tol = rat_param(params, "tol");
        for (std::uint64_t n : range_of(params, "n")) {
          tasks.push_back([=] { return yan_ratios_cert(*model, n, tol); });
        }
        break;
      }
      case TheoremTag::WnLimit: {
        const Rat q = rat_param(params, "q");
        const Rat tol = rat_param(params, "tol");
        for (std::uint64_t n : range_of(params, "n")) {
          tasks.push_back([=] { return wn_limit_cert(*model, n, q, tol); });
        }
        break;
      }
      case TheoremTag::SpeckerReduction: {
        if (!model->sequence().is_specker()) {
          throw ValidationError("specker-reduction needs a model with a specker sequence");
        }
        auto seq = std::make_shared<Sequence>(model->sequence());
        for (std::uint64_t l : range_of(params, "l")) {
          tasks.push_back([=] { return specker_reduction_cert(*seq, l); });
        }
        break;
      }
      case TheoremTag::KSAlgebra:
        break;  // handled above
    }

    if (tasks.empty()) throw ValidationError("empty parameter grid");
    return check_outcome(theorem, run_tasks(tasks, threads));
  } catch (const Error& e) {
    return Outcome{kExitConfigError, {}, "", e.what()};
  } catch (const Json::exception& e) {
    return Outcome{kExitConfigError, {}, "", std::string("config: ") + e.what()};
  }
}

Outcome run_sweep(const std::string& quantity, const std::string& axis, std::uint64_t lo,
                  std::uint64_t hi, const Json& config) {
  try {
    if (lo > hi) throw ValidationError("sweep range has lo > hi");
    const Json params = config.contains("params") ? config.at("params") : Json::object();
    const unsigned budget = effective_precision_budget(config);
    std::ostringstream csv;
    int exit_code = kExitPass;

    if (quantity == "die-power") {
      if (axis != "k") throw ValidationError("die-power sweeps over axis k");
      if (lo < 2) throw ValidationError("die-power needs k >= 2");
      if (params.contains("N") && !params.at("N").is_number_integer()) {
        throw ValidationError("sweep parameter \"N\" must be a single integer");
      }
      const std::uint64_t N =
          params.contains("N") ? params.at("N").get<std::uint64_t>() : 1;
      csv << "k,N,value,value_dec,vs_e_negN\n";
      for (std::uint64_t k = lo; k <= hi; ++k) {
        // (1 - 1/k)^{kN}, exact
        const Rat v = Rat(static_cast<long>(k) - 1, static_cast<long>(k))
                          .pow(static_cast<long>(k * N));
        char sign;
        try {
          const CompareResult cmp = compare_rational_vs_enclosed(
              v,
              [&](unsigned prec) { return exp_neg_enclosure(static_cast<unsigned>(N), prec); },
              budget);
          sign = cmp.order == Ordering::Less ? '-' : '+';
        } catch (const BudgetError&) {
          sign = '?';
          exit_code = kExitUndecided;
        }
        csv << k << ',' << N << ',' << v.to_string() << ',' << v.decimal(12) << ',' << sign
            << '\n';
      }
    } else if (quantity == "first-bc-margin") {
      if (axis != "l") throw ValidationError("first-bc-margin sweeps over axis l");
      if (!config.contains("model")) throw ValidationError("config is missing \"model\"");
      auto model = model_from_json(config.at("model"));
      const ConvergenceRate phi = phi_from(config);
      const std::uint64_t m = params.at("m").get<std::uint64_t>();
      csv << "l,m,lhs,lhs_dec,rhs,rhs_dec,margin,margin_dec,margin_sign,verdict\n";
      for (std::uint64_t l = lo; l <= hi; ++l) {
        const Certificate c = first_bc(*model, phi, l, m);
        if (c.verdict == Verdict::Fail) exit_code = kExitFail;
        csv << l << ',' << m << ',' << std::get<Rat>(c.lhs).to_string() << ','
            << std::get<Rat>(c.lhs).decimal(12) << ',' << std::get<Rat>(c.rhs).to_string()
            << ',' << std::get<Rat>(c.rhs).decimal(12) << ',' << c.margin.to_string() << ','
            << c.margin.decimal(12) << ',' << (c.margin.sgn() >= 0 ? '+' : '-') << ','
            << to_string(c.verdict) << '\n';
      }
    } else if (quantity == "wn") {
      if (axis != "n") throw ValidationError("wn sweeps over axis n");
      if (lo < 2) throw ValidationError("wn needs n >= 2");
      if (!config.contains("model")) throw ValidationError("config is missing \"model\"");
      auto model = model_from_json(config.at("model"));
      const bool has_q = params.contains("q");
      const Rat q = has_q ? rat_param(params, "q") : Rat(0);
      csv << (has_q ? "n,u,v,w,w_dec,abs_err,abs_err_dec\n" : "n,u,v,w,w_dec\n");
      for (std::uint64_t n = lo; n <= hi; ++n) {
        const WnStats st = wn_stats(*model, n);
        csv << n << ',' << st.u.to_string() << ',' << st.v.to_string() << ','
            << st.w.to_string() << ',' << st.w.decimal(12);
        if (has_q) {
          const Rat err = (st.w - q).abs();
          csv << ',' << err.to_string() << ',' << err.decimal(12);
        }
        csv << '\n';
      }
    } else {
      throw ValidationError("unknown sweep quantity \"" + quantity +
                            "\" (expected die-power, first-bc-margin, or wn)");
    }

    Outcome o;
    o.exit_code = exit_code;
    o.csv = csv.str();
    return o;
  } catch (const Error& e) {
    return Outcome{kExitConfigError, {}, "", e.what()};
  } catch (const Json::exception& e) {
    return Outcome{kExitConfigError, {}, "", std::string("config: ") + e.what()};
  }
}

Outcome run_specker(const Json& config) {
  try {
    if (!config.contains("model")) throw ValidationError("config is missing \"model\"");
    auto model = model_from_json(config.at("model"));
    if (!model->sequence().is_specker()) {
      throw ValidationError("specker command needs a model with a specker sequence");
    }
    const Sequence& seq = model->sequence();
    const Json params = config.contains("params") ? config.at("params") : Json::object();
    const std::uint64_t L = params.contains("L") ? params.at("L").get<std::uint64_t>() : 10;

    Json rows = Json::array();
    bool all_ok = true;
    for (std::uint64_t l = 1; l <= L; ++l) {
      const Certificate c = specker_reduction_cert(seq, l);
      if (!c.pass()) all_ok = false;
      rows.push_back(Json{{"l", l},
                          {"phi_0_l", c.trace.at("phi_0_l")},
                          {"extracted", c.trace.at("extracted")},
                          {"error", std::get<Rat>(c.rhs).to_string()},
                          {"error_bound", std::get<Rat>(c.lhs).to_string()},
                          {"within_bound", std::get<Rat>(c.rhs) <= std::get<Rat>(c.lhs)},
                          {"heaviest_relevant_reveal_step",
                           c.trace.at("heaviest_relevant_reveal_step")},
                          {"phi_reaches_reveal", c.trace.at("phi_reaches_reveal")}});
    }
    Outcome o;
    o.exit_code = all_ok ? kExitPass : kExitFail;
    o.output = Json{{"command", "specker"},
                    {"q", seq.specker_limit().to_string()},
                    {"sequence", to_json(seq)},
                    {"rows", rows}};
    return o;
  } catch (const Error& e) {
    return Outcome{kExitConfigError, {}, "", e.what()};
  } catch (const Json::exception& e) {
    return Outcome{kExitConfigError, {}, "", std::string("config: ") + e.what()};
  }
}

Outcome run_oracle_diff(const Json& config) {
  try {
    if (!config.contains("model")) throw ValidationError("config is missing \"model\"");
    auto model = model_from_json(config.at("model"));
    const Json opts = config.contains("oracle") ? config.at("oracle") : Json::object();
    const std::uint64_t seed = opts.contains("seed") ? opts.at("seed").get<std::uint64_t>() : 1;
    const std::uint64_t n_union =
        opts.contains("union_instances") ? opts.at("union_instances").get<std::uint64_t>() : 100;
    const std::uint64_t n_count =
        opts.contains("count_instances") ? opts.at("count_instances").get<std::uint64_t>() : 50;
    const Index max_window =
        opts.contains("max_window") ? opts.at("max_window").get<Index>() : 10;
    const Index max_start = opts.contains("max_start") ? opts.at("max_start").get<Index>() : 20;
    const Index max_n = opts.contains("max_n") ? opts.at("max_n").get<Index>() : 12;

    SplitMix64 rng(seed);
    Json mismatches = Json::array();

    for (std::uint64_t i = 0; i < n_union; ++i) {
      const Index n = rng.range(1, max_start);
      const Index m = n + rng.below(max_window);
      const Rat closed = model->union_prob(n, m);
      const Rat brute = oracle::brute_union(*model, n, m);
      if (closed != brute) {
        mismatches.push_back(Json{{"what", "union"},
                                  {"n", n},
                                  {"m", m},
                                  {"closed", closed.to_string()},
                                  {"brute", brute.to_string()}});
      }
    }
    for (std::uint64_t i = 0; i < n_count; ++i) {
      const Index n = rng.range(1, max_n);
      const CountDistribution closed = model->count_distribution(n);
      const CountDistribution brute = oracle::brute_count_dist(*model, n);
      const bool same = closed.pmf == brute.pmf && closed.mean == brute.mean &&
                        closed.variance == brute.variance;
      if (!same) {
        mismatches.push_back(Json{{"what", "count"}, {"n", n}});
      }
    }

    Outcome o;
    o.exit_code = mismatches.empty() ? kExitPass : kExitFail;
    o.output = Json{{"command", "oracle-diff"},
                    {"seed", seed},
                    {"union_instances", n_union},
                    {"count_instances", n_count},
                    {"mismatches", mismatches}};
    return o;
  } catch (const Error& e) {
    return Outcome{kExitConfigError, {}, "", e.what()};
  } catch (const Json::exception& e) {
    return Outcome{kExitConfigError, {}, "", std::string("config: ") + e.what()};
  }
}

}  // namespace bcq::cli
