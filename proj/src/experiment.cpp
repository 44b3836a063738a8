// SPDX-License-Identifier: Apache-2.0
#include "ecf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ecf/rng.hpp"

namespace ecf {

namespace {
constexpr uint64_t kChannelLabel = 0x6368616eULL;  // "chan"
constexpr uint64_t kSolverLabel = 0x736f6c76ULL;   // "solv"
}  // namespace

uint64_t trial_channel_seed(uint64_t scenario_seed, int m, int trial) {
  return Rng::derive(scenario_seed,
                     {kChannelLabel, static_cast<uint64_t>(m), static_cast<uint64_t>(trial)});
}

uint64_t trial_solver_seed(uint64_t scenario_seed, int m, int trial) {
  return Rng::derive(scenario_seed,
                     {kSolverLabel, static_cast<uint64_t>(m), static_cast<uint64_t>(trial)});
}

void Scenario::validate() const {
  if (m_sweep.empty()) throw std::invalid_argument("scenario: empty M sweep");
  if (l < 1) throw std::invalid_argument("scenario: need at least one UE");
  for (int m : m_sweep) {
    if (m <= l) throw std::invalid_argument("scenario: every M must exceed L");
  }
  if (trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("scenario: no schemes requested");
  if (pt_watts <= 0.0) throw std::invalid_argument("scenario: total power must be positive");
  for (const auto& s : schemes) parse_scheme(s, default_order());  // throws on unknown names
  if (succ_mode != "literal" && succ_mode != "conservative") {
    throw std::invalid_argument("scenario: succ_mode must be literal or conservative");
  }
  default_order();
}

UeOrderStrategy Scenario::default_order() const {
  if (ue_order == "hungarian") return UeOrderStrategy::Hungarian;
  if (ue_order == "received_power" || ue_order == "rp") return UeOrderStrategy::ReceivedPower;
  if (ue_order == "channel_norm" || ue_order == "norm") return UeOrderStrategy::ChannelNorm;
  throw std::invalid_argument("scenario: unknown ue_order " + ue_order);
}

SuccRateMode Scenario::mode() const {
  return succ_mode == "conservative" ? SuccRateMode::Conservative : SuccRateMode::Literal;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  if (j.contains("m")) {
    if (j["m"].is_array()) {
      sc.m_sweep = j["m"].get<std::vector<int>>();
    } else {
      sc.m_sweep = {j["m"].get<int>()};
    }
  }
  if (j.contains("l")) sc.l = j["l"].get<int>();
  if (j.contains("side_m")) sc.side_m = j["side_m"].get<double>();
  if (j.contains("pt_watts")) sc.pt_watts = j["pt_watts"].get<double>();
  if (j.contains("pt_mw")) sc.pt_watts = j["pt_mw"].get<double>() * 1e-3;
  if (j.contains("noise_dbw")) sc.noise_dbw = j["noise_dbw"].get<double>();
  if (j.contains("shadow_sd_db")) sc.shadow_sd_db = j["shadow_sd_db"].get<double>();
  if (j.contains("d_min_m")) sc.d_min_m = j["d_min_m"].get<double>();
  if (j.contains("trials")) sc.trials = j["trials"].get<int>();
  if (j.contains("seed")) sc.seed = j["seed"].get<uint64_t>();
  if (j.contains("schemes")) sc.schemes = j["schemes"].get<std::vector<std::string>>();
  if (j.contains("ue_order")) sc.ue_order = j["ue_order"].get<std::string>();
  if (j.contains("succ_mode")) sc.succ_mode = j["succ_mode"].get<std::string>();
  if (j.contains("cap")) sc.cap = j["cap"].get<int>();
  if (j.contains("prime")) sc.prime = j["prime"].get<int>();
  if (j.contains("threads")) sc.threads = j["threads"].get<int>();
  if (j.contains("timing")) sc.timing = j["timing"].get<bool>();
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    if (s.contains("n_starts")) sc.solver.n_starts = s["n_starts"].get<int>();
    if (s.contains("max_linearizations"))
      sc.solver.max_linearizations = s["max_linearizations"].get<int>();
    if (s.contains("pocs_sweeps")) sc.solver.pocs_sweeps = s["pocs_sweeps"].get<int>();
    if (s.contains("pgd_iters")) sc.solver.pgd_iters = s["pgd_iters"].get<int>();
    if (s.contains("r_steps")) sc.solver.r_steps = s["r_steps"].get<int>();
    if (s.contains("s_substeps")) sc.solver.s_substeps = s["s_substeps"].get<int>();
  }
  return sc;
}

namespace {

std::vector<TrialRecord> run_cell(const Scenario& sc, int m, int trial) {
  const uint64_t ch_seed = trial_channel_seed(sc.seed, m, trial);

  const NetworkGeometry geom = place_uniform(m, sc.l, sc.side_m, ch_seed);
  const LargeScaleMap ls = large_scale(geom, sc.shadow_sd_db, sc.d_min_m, ch_seed);
  const ChannelRealization ch = draw_channel(ls, sc.noise_dbw, ch_seed);

  SchemeOptions opt;
  opt.solver = sc.solver;
  opt.solver.seed = trial_solver_seed(sc.seed, m, trial);
  opt.succ_mode = sc.mode();
  opt.max_ues_per_ap = sc.cap;
  opt.prime = sc.prime;

  RealizationPipeline pipe(ch, sc.pt_watts, opt);

  std::vector<TrialRecord> out;
  out.reserve(sc.schemes.size());
  for (const auto& name : sc.schemes) {
    const SchemeSpec spec = parse_scheme(name, sc.default_order());
    const auto t0 = std::chrono::steady_clock::now();
    const SchemeOutcome res = pipe.run(spec);
    const auto t1 = std::chrono::steady_clock::now();

    TrialRecord rec;
    rec.scheme = name;
    rec.m = m;
    rec.l = sc.l;
    rec.trial = trial;
    rec.seed = ch_seed;
    rec.sum_rate = res.report.sum_rate;
    rec.fronthaul_symbols = res.report.fronthaul_symbols_per_use;
    rec.wall_ms =
        sc.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
    rec.per_ue_rates = res.report.per_ue_rates;
    rec.solver_fallback = res.solver_fallback;
    rec.recoverable_all = res.recoverable_all;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<TrialRecord> run_scenario(const Scenario& sc) {
  sc.validate();

  struct Cell {
    int m;
    int trial;
  };
  std::vector<Cell> cells;
  for (int m : sc.m_sweep) {
    for (int t = 0; t < sc.trials; ++t) cells.push_back({m, t});
  }

  std::vector<std::vector<TrialRecord>> results(cells.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      sc.threads > 0 ? static_cast<unsigned>(sc.threads) : hw;

  if (workers <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) results[i] = run_cell(sc, cells[i].m, cells[i].trial);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= cells.size()) break;
        results[i] = run_cell(sc, cells[i].m, cells[i].trial);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // order-stabilized emission: (m position in sweep, trial, scheme position)
  std::vector<TrialRecord> flat;
  flat.reserve(cells.size() * sc.schemes.size());
  for (auto& group : results) {
    for (auto& rec : group) flat.push_back(std::move(rec));
  }
  std::map<int, int> m_pos;
  for (size_t i = 0; i < sc.m_sweep.size(); ++i) m_pos[sc.m_sweep[i]] = static_cast<int>(i);
  std::map<std::string, int> s_pos;
  for (size_t i = 0; i < sc.schemes.size(); ++i) s_pos[sc.schemes[i]] = static_cast<int>(i);
  std::stable_sort(flat.begin(), flat.end(), [&](const TrialRecord& a, const TrialRecord& b) {
    if (a.m != b.m) return m_pos[a.m] < m_pos[b.m];
    if (a.trial != b.trial) return a.trial < b.trial;
    return s_pos[a.scheme] < s_pos[b.scheme];
  });
  return flat;
}

namespace {

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void write_csv(const std::vector<TrialRecord>& records, const Scenario& sc, std::ostream& os) {
  os << "scheme,m,l,trial,seed,sum_rate_bits,fronthaul_symbols,wall_ms";
  for (int l = 1; l <= sc.l; ++l) os << ",rate_ue_" << l;
  os << "\n";
  for (const auto& r : records) {
    os << r.scheme << ',' << r.m << ',' << r.l << ',' << r.trial << ',' << r.seed << ','
       << fmt9(r.sum_rate) << ',' << r.fronthaul_symbols << ',' << fmt9(r.wall_ms);
    for (Eigen::Index i = 0; i < r.per_ue_rates.size(); ++i) {
      os << ',' << fmt9(r.per_ue_rates[i]);
    }
    os << "\n";
  }
}

nlohmann::json summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");

  // (scheme, m) -> trial -> sum rate
  std::map<std::string, std::map<int, std::map<int, double>>> by_key;
  std::map<std::string, std::map<int, int>> recoverable_count;
  for (const auto& r : records) {
    by_key[r.scheme][r.m][r.trial] = r.sum_rate;
    recoverable_count[r.scheme][r.m] += r.recoverable_all ? 1 : 0;
  }

  nlohmann::json out;
  for (const auto& [scheme, by_m] : by_key) {
    for (const auto& [m, trials] : by_m) {
      std::vector<double> vals;
      vals.reserve(trials.size());
      for (const auto& [_, v] : trials) vals.push_back(v);
      const size_t n = vals.size();
      const double mean =
          std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(n);
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
      const double stderr_ = n > 1 ? std::sqrt(var / static_cast<double>(n)) : 0.0;

      std::vector<double> cdf = vals;
      std::sort(cdf.begin(), cdf.end());

      nlohmann::json cell;
      cell["n"] = n;
      cell["mean"] = mean;
      cell["stderr"] = stderr_;
      cell["cdf"] = cdf;
      cell["recoverable_fraction"] =
          static_cast<double>(recoverable_count[scheme][m]) / static_cast<double>(n);

      for (const char* ref : {"CF", "MRC"}) {
        const auto it = by_key.find(ref);
        if (it == by_key.end() || it->second.find(m) == it->second.end() || scheme == ref) {
          continue;
        }
        const auto& ref_trials = it->second.at(m);
        double own_sum = 0.0, ref_sum = 0.0, ratio_sum = 0.0;
        int paired = 0;
        for (const auto& [trial, v] : trials) {
          const auto rt = ref_trials.find(trial);
          if (rt == ref_trials.end()) continue;
          own_sum += v;
          ref_sum += rt->second;
          if (rt->second > 0.0) {
            ratio_sum += v / rt->second;
            ++paired;
          }
        }
        nlohmann::json cmp;
        cmp["ratio_of_means"] = ref_sum > 0.0 ? own_sum / ref_sum : 0.0;
        cmp["mean_of_ratios"] = paired > 0 ? ratio_sum / static_cast<double>(paired) : 0.0;
        cell[ref == std::string("CF") ? "vs_cf" : "vs_mrc"] = cmp;
      }
      out["results"][scheme][std::to_string(m)] = cell;
    }
  }
  return out;
}

}  // namespace ecf
