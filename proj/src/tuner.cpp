#include "srkpa/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "srkpa/rng.hpp"

namespace srkpa {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t id_value(const Configuration& c) {
  const std::string id = c.id();
  std::uint64_t v = 0;
  std::from_chars(id.data(), id.data() + id.size(), v, 16);
  return v;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ordered_json values_json(const Configuration& c) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : c.values) j[k] = v;
  return j;
}

}  // namespace

std::string_view to_string(EvalStatus s) { return s == EvalStatus::Ok ? "OK" : "TIMEOUT_CAPPED"; }

TaeOutcome SyntheticTae::run(const Configuration& config, const std::string&, std::uint64_t seed, double cap) {
  const double t = f_(config, seed);
  return {t, t >= cap};
}

SyntheticTae::Surface quadratic_surface(std::string param, double optimum, double scale, double offset,
                                        double sigma) {
  return [=](const Configuration& c, std::uint64_t seed) {
    const double x = std::stod(c.get(param));
    std::mt19937_64 rng(derive_seed(id_value(c), seed));
    std::normal_distribution<double> noise(0.0, sigma);
    return scale * (x - optimum) * (x - optimum) + offset + noise(rng);
  };
}

TaeOutcome SolverTae::run(const Configuration& config, const std::string& instance, std::uint64_t seed, double cap) {
  CampaignItem item = item_;
  item.instance_path = instance;
  item.config = NamedConfig{"aac-" + config.id().substr(0, 8), item_.config.base, config.flags()};
  item.seed = seed;
  item.timeout = cap;
  const RunRecord rec = run_once(item);
  if (rec.status == RunStatus::Timeout) return {cap, true};
  if (rec.status != RunStatus::Sat)
    throw HarnessError("evaluation on " + instance + " ended with status " + std::string(to_string(rec.status)) +
                       (rec.anomaly.empty() ? "" : ": " + rec.anomaly));
  if (item.spec && !rec.verified) throw HarnessError("evaluation on " + instance + ": " + rec.anomaly);
  return {rec.effective_time(), false};
}

EvalResult evaluate(TargetEvaluator& tae, const Configuration& config, const std::string& instance,
                    std::uint64_t seed, double cutoff) {
  if (!(cutoff > 0)) throw std::invalid_argument("evaluate: cutoff must be positive");
  const TaeOutcome out = tae.run(config, instance, seed, cutoff);
  EvalResult r;
  r.config_id = config.id();
  r.instance = instance;
  r.seed = seed;
  r.cap = cutoff;
  if (out.timed_out || out.runtime >= cutoff) {
    r.status = EvalStatus::TimeoutCapped;
    r.runtime = cutoff;
  } else {
    r.runtime = std::max(0.0, out.runtime);
  }
  return r;
}

JournalTae::JournalTae(std::istream& journal) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(journal, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
      if (j.at("event") != "eval") continue;
      EvalResult r;
      r.config_id = j.at("config").get<std::string>();
      r.instance = j.at("instance").get<std::string>();
      r.pool_index = j.at("pool").get<std::size_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.runtime = j.at("runtime").get<double>();
      r.cap = j.at("cap").get<double>();
      r.status = j.at("status") == "OK" ? EvalStatus::Ok : EvalStatus::TimeoutCapped;
      results_[{r.config_id, r.instance, r.seed}].push_back(r);
    } catch (const nlohmann::json::exception& e) {
      throw InputError("journal line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

TaeOutcome JournalTae::run(const Configuration& config, const std::string& instance, std::uint64_t seed, double cap) {
  const auto it = results_.find({config.id(), instance, seed});
  if (it != results_.end()) {
    for (const auto& r : it->second)
      if (r.status == EvalStatus::Ok) return {r.runtime, r.runtime >= cap};
    for (const auto& r : it->second)
      if (r.cap >= cap) return {cap, true};
  }
  throw InputError("journal has no result for configuration " + config.id() + " on " + instance + " seed " +
                   std::to_string(seed));
}

std::vector<std::pair<std::string, std::uint64_t>> race_pool(const RaceOptions& options) {
  if (options.instances.empty()) throw std::invalid_argument("race: no instances");
  std::vector<std::pair<std::string, std::uint64_t>> pool;
  for (std::size_t i = 0; i < options.max_runs; ++i)
    pool.emplace_back(options.instances[i % options.instances.size()], derive_seed(options.seed, i) & 0x7fffffff);
  return pool;
}

RaceResult race(const ParamSpace& space, TargetEvaluator& tae, const RaceOptions& opt) {
  if (opt.budget < 1) throw std::invalid_argument("race: budget must allow one evaluation");
  if (opt.max_runs < 1) throw std::invalid_argument("race: max_runs must be positive");
  const auto pool = race_pool(opt);
  std::mt19937_64 rng(derive_seed(opt.seed, 0x5a4d5043ull));
  RaceResult res;
  std::map<std::pair<std::string, std::size_t>, EvalResult> cache;

  auto log_eval = [&](const EvalResult& r, const Configuration& c) {
    res.evaluations.push_back(r);
    if (!opt.journal) return;
    ordered_json j;
    j["event"] = "eval";
    j["config"] = r.config_id;
    j["values"] = values_json(c);
    j["instance"] = r.instance;
    j["pool"] = r.pool_index;
    j["seed"] = r.seed;
    j["runtime"] = r.runtime;
    j["cap"] = r.cap;
    j["status"] = to_string(r.status);
    *opt.journal << j.dump() << '\n';
  };

  // Evaluates pool entries [from, to) not yet known at this cap. Returns
  // false when the budget ran out first.
  auto run_batch = [&](const Configuration& c, std::size_t from, std::size_t to, double cap) {
    const std::string id = c.id();
    std::vector<std::size_t> need;
    for (std::size_t i = from; i < to; ++i) {
      const auto it = cache.find({id, i});
      if (it == cache.end() || (it->second.status == EvalStatus::TimeoutCapped && it->second.cap < cap))
        need.push_back(i);
    }
    bool complete = true;
    if (need.size() > opt.budget - res.tae_calls) {
      need.resize(opt.budget - res.tae_calls);
      complete = false;
    }
    std::vector<EvalResult> out(need.size());
    std::vector<std::exception_ptr> errors(need.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t k = next++; k < need.size(); k = next++) {
        try {
          out[k] = evaluate(tae, c, pool[need[k]].first, pool[need[k]].second, cap);
          out[k].pool_index = need[k];
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    };
    const std::size_t workers = std::min(std::max<std::size_t>(opt.workers, 1), need.size());
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (const auto& r : out) {
      cache[{id, r.pool_index}] = r;
      ++res.tae_calls;
      log_eval(r, c);
    }
    return complete;
  };

  auto results_of = [&](const Configuration& c, std::size_t n) {
    const std::string id = c.id();
    std::vector<EvalResult> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(cache.at({id, i}));
    return v;
  };
  auto median = [&](const Configuration& c, std::size_t n) {
    std::vector<double> t;
    for (const auto& r : results_of(c, n)) t.push_back(r.runtime);
    return median_of(std::move(t));
  };
  auto promote = [&](const Configuration& c, std::size_t runs) {
    Incumbent inc{c, results_of(c, runs), median(c, runs), res.tae_calls};
    if (opt.journal) {
      ordered_json j;
      j["event"] = "incumbent";
      j["config"] = c.id();
      j["values"] = values_json(c);
      j["provenance"] = to_string(c.provenance);
      j["median"] = inc.median;
      j["runs"] = runs;
      j["tae_calls"] = res.tae_calls;
      *opt.journal << j.dump() << '\n';
    }
    res.history.push_back(std::move(inc));
  };

  Configuration inc = default_config(space);
  run_batch(inc, 0, 1, opt.cutoff);
  std::size_t inc_runs = 1;
  promote(inc, inc_runs);

  std::size_t stall = 0;
  while (res.tae_calls < opt.budget) {
    const std::size_t calls_before = res.tae_calls;
    if (inc_runs < opt.max_runs) {
      if (!run_batch(inc, inc_runs, inc_runs + 1, opt.cutoff)) break;
      ++inc_runs;
    }
    if (res.tae_calls >= opt.budget) break;

    const Configuration chal = sample_config(space, rng);
    if (!chal.same_values(inc)) {
      ++res.challengers;
      std::size_t done = 0, batch = 1;
      bool alive = true, complete = true;
      while (done < inc_runs) {
        const std::size_t upto = std::min(inc_runs, done + batch);
        double cap = std::min(opt.cutoff, opt.cap_factor * median(inc, upto));
        if (!(cap > 0)) cap = opt.cutoff;
        if (!run_batch(chal, done, upto, cap)) {
          complete = false;
          break;
        }
        done = upto;
        batch *= 2;
        if (median(chal, done) > median(inc, done)) {
          alive = false;
          break;
        }
      }
      if (complete && alive && median(chal, inc_runs) < median(inc, inc_runs)) {
        inc = chal;
        promote(inc, inc_runs);
      }
      if (!complete) break;
    }
    stall = res.tae_calls == calls_before ? stall + 1 : 0;
    if (stall >= opt.max_stall) break;
  }
  return res;
}

NamedConfig export_incumbent(std::span<const Incumbent> history, int threads) {
  if (history.empty()) throw std::invalid_argument("export_incumbent: empty history");
  const Configuration& c = history.back().config;
  return NamedConfig{"aac-" + c.id().substr(0, 8), base_flags(threads), c.flags()};
}

std::vector<std::pair<std::string, double>> journal_incumbents(std::istream& journal) {
  std::vector<std::pair<std::string, double>> out;
  std::string line;
  while (std::getline(journal, line)) {
    if (line.empty()) continue;
    const auto j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) throw InputError("journal: malformed line");
    if (j.value("event", "") == "incumbent") out.emplace_back(j.at("config").get<std::string>(), j.at("median").get<double>());
  }
  return out;
}

}  // namespace srkpa
