// eia: ergodic interference alignment simulator and rate analysis CLI.
//
// Subcommands: simulate-ff, region, sweep, pairing-stats. Every run embeds
// its fully resolved configuration in the output, and identical
// config+seed+threads produce byte-identical output.
//
// Exit codes: 0 success, 2 validation error, 3 runtime failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eia/channels.hpp"
#include "eia/gauss_rates.hpp"
#include "eia/pairing.hpp"
#include "eia/protocol.hpp"
#include "eia/rate_region.hpp"
#include "eia/typicality.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  return j;
}

void write_text(const std::string& content, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + output_path);
  out << content;
}

void emit_json(const json& j, const std::string& output_path) {
  write_text(j.dump(2) + "\n", output_path);
}

bool wants_json(const std::string& output_path) {
  return output_path.size() >= 5 && output_path.rfind(".json") == output_path.size() - 5;
}

// "start:step:stop", a comma list, or a single value (all in dB).
std::vector<double> parse_snr_grid(const std::string& s) {
  std::vector<double> grid;
  const auto colons = std::count(s.begin(), s.end(), ':');
  try {
    if (colons == 2) {
      const auto c1 = s.find(':'), c2 = s.find(':', c1 + 1);
      const double start = std::stod(s.substr(0, c1));
      const double step = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
      const double stop = std::stod(s.substr(c2 + 1));
      if (!(step > 0.0)) throw std::invalid_argument("snr grid step must be > 0");
      for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
    } else {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) grid.push_back(std::stod(tok));
      }
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed --snr-db grid: " + s);
  }
  if (grid.empty()) throw std::invalid_argument("empty SNR grid");
  return grid;
}

double default_tau(std::uint32_t k) {
  // discard probability ~ K^2 exp(-tau^2) < 1e-3
  return std::sqrt(std::log(1000.0 * double(k) * double(k)));
}

// Flag presence wins over config-file values, which win over defaults.
template <typename T>
T resolved(const CLI::Option* opt, const T& flag_value, const json& file, const char* key,
           const T& fallback) {
  if (opt != nullptr && opt->count() > 0) return flag_value;
  if (file.contains(key)) return file.at(key).get<T>();
  if (key == std::string("k") && file.contains("K")) return file.at("K").get<T>();
  return fallback;
}

struct CommonArgs {
  std::string config_path;
  std::string output_path;
  int threads = 1;
};

int cmd_simulate_ff(const CLI::App* sub, const CommonArgs& common, std::uint32_t q, std::uint32_t k,
                    double rho, std::int64_t n, std::uint64_t seed, std::int64_t nprime, std::int64_t m,
                    double code_rate, const std::string& mode, const std::string& trace_path) {
  json file = common.config_path.empty() ? json::object() : load_config_file(common.config_path);

  eia::ProtocolConfig cfg;
  cfg.q = resolved(sub->get_option("--q"), q, file, "q", cfg.q);
  cfg.num_users = resolved(sub->get_option("--k"), k, file, "k", cfg.num_users);
  cfg.rho = resolved(sub->get_option("--rho"), rho, file, "rho", cfg.rho);
  cfg.n = resolved(sub->get_option("--n"), n, file, "n", cfg.n);
  cfg.seed = resolved(sub->get_option("--seed"), seed, file, "seed", cfg.seed);
  cfg.block_len = resolved(sub->get_option("--nprime"), nprime, file, "nprime", std::int64_t(1));

  const std::string mode_s = resolved(sub->get_option("--mode"), mode, file, "mode", std::string("fifo"));
  if (mode_s == "fifo") cfg.mode = eia::PairingMode::CausalFifo;
  else if (mode_s == "offline") cfg.mode = eia::PairingMode::OfflineSplit;
  else throw std::invalid_argument("mode must be \"fifo\" or \"offline\"");

  const double rate = resolved(sub->get_option("--code-rate"), code_rate, file, "code_rate", -1.0);
  std::int64_t m_resolved = resolved(sub->get_option("--m"), m, file, "m", std::int64_t(-1));
  if (m_resolved < 0) {
    m_resolved = rate >= 0.0 ? eia::ProtocolConfig::msg_len_for_rate(cfg.q, cfg.block_len, rate)
                             : cfg.block_len;  // uncoded by default
  }
  cfg.msg_len = m_resolved;
  cfg.collect_trace = !trace_path.empty();

  eia::ProtocolReport rep = eia::run_protocol(cfg);
  if (!trace_path.empty()) {
    std::ofstream tr(trace_path, std::ios::binary);
    if (!tr) throw std::runtime_error("cannot open trace file: " + trace_path);
    rep.write_trace_csv(tr);
  }
  emit_json(rep.to_json(), common.output_path);
  return 0;
}

int cmd_region(const CLI::App* sub, const CommonArgs& common, std::uint32_t q, double rho,
               const std::string& rates_str) {
  json file = common.config_path.empty() ? json::object() : load_config_file(common.config_path);
  const std::uint32_t q_r = resolved(sub->get_option("--q"), q, file, "q", std::uint32_t(5));
  const double rho_r = resolved(sub->get_option("--rho"), rho, file, "rho", 0.0);

  json rates_json;
  if (sub->get_option("--rates")->count() > 0) {
    try {
      rates_json = json::parse(rates_str);
    } catch (const json::parse_error&) {
      throw std::invalid_argument("malformed --rates, expected a JSON list such as [1.2,0.3,0.3]");
    }
  } else if (file.contains("rates")) {
    rates_json = file.at("rates");
  } else {
    throw std::invalid_argument("region: provide --rates as a JSON list");
  }
  if (!rates_json.is_array() || rates_json.empty()) {
    throw std::invalid_argument("malformed --rates, expected a nonempty JSON list");
  }
  std::vector<double> rates;
  for (const auto& v : rates_json) {
    if (!v.is_number()) throw std::invalid_argument("malformed --rates, entries must be numbers");
    rates.push_back(v.get<double>());
  }

  eia::require_odd_prime(q_r);
  const eia::RateRegion region =
      eia::RateRegion::finite_field(std::uint32_t(rates.size()), {q_r, rho_r});
  const bool member = eia::region_contains(region, rates);

  auto pairs_json = [](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& ps) {
    json arr = json::array();
    for (auto [a, b] : ps) arr.push_back({a + 1, b + 1});  // 1-based user indices
    return arr;
  };

  json out{{"config", json{{"q", q_r}, {"rho", rho_r}, {"rates", rates}}},
           {"cap_bits", region.cap_bits},
           {"member", member},
           {"violating_pairs", pairs_json(eia::violating_pairs(region, rates))},
           {"tight_pairs", pairs_json(eia::tight_pairs(region, rates))}};
  emit_json(out, common.output_path);
  return 0;
}

int cmd_sweep(const CLI::App* sub, const CommonArgs& common, const std::string& grid_str,
              std::int64_t samples, std::uint64_t seed) {
  json file = common.config_path.empty() ? json::object() : load_config_file(common.config_path);

  std::vector<double> grid;
  if (sub->get_option("--snr-db")->count() > 0) {
    grid = parse_snr_grid(grid_str);
  } else if (file.contains("snr_db")) {
    grid = file.at("snr_db").get<std::vector<double>>();
    if (grid.empty()) throw std::invalid_argument("empty SNR grid");
  } else {
    grid = parse_snr_grid("-10:1:30");
  }
  const std::int64_t samples_r =
      resolved(sub->get_option("--samples"), samples, file, "samples", std::int64_t(100000));
  const std::uint64_t seed_r = resolved(sub->get_option("--seed"), seed, file, "seed", std::uint64_t(1));
  const int threads = std::max(1, resolved(sub->get_option("--threads"), common.threads, file, "threads", 1));
  if (samples_r < 1) throw std::invalid_argument("sweep: samples must be >= 1");

  auto rows = eia::sweep_figure(grid, samples_r, seed_r, threads);
  const json cfg{{"snr_db", grid}, {"samples", samples_r}, {"seed", seed_r}, {"threads", threads}};

  if (wants_json(common.output_path)) {
    emit_json(json{{"config", cfg}, {"rows", eia::sweep_rows_json(rows)}}, common.output_path);
  } else {
    std::ostringstream os;
    eia::write_sweep_csv(os, rows, cfg);
    write_text(os.str(), common.output_path);
  }
  return 0;
}

int cmd_pairing_stats(const CLI::App* sub, const CommonArgs& common, const std::string& model,
                      std::uint32_t q, std::uint32_t k, std::int64_t n, std::uint64_t seed, double gamma,
                      double tau, double delta, std::int64_t samples, const std::string& plan_csv) {
  json file = common.config_path.empty() ? json::object() : load_config_file(common.config_path);

  eia::ChannelRunConfig cc;
  cc.model = resolved(sub->get_option("--model"), model, file, "model", std::string("ff"));
  cc.q = resolved(sub->get_option("--q"), q, file, "q", std::uint32_t(5));
  cc.num_users = resolved(sub->get_option("--k"), k, file, "k", std::uint32_t(3));
  cc.n = resolved(sub->get_option("--n"), n, file, "n", std::int64_t(10000));
  cc.seed = resolved(sub->get_option("--seed"), seed, file, "seed", std::uint64_t(1));
  cc.validate();
  const double delta_r = resolved(sub->get_option("--delta"), delta, file, "delta", 0.05);
  const std::int64_t trials = resolved(sub->get_option("--samples"), samples, file, "samples",
                                       std::int64_t(50));
  if (delta_r <= 0.0) throw std::invalid_argument("pairing-stats: delta must be > 0");
  if (trials < 1) throw std::invalid_argument("pairing-stats: samples (trial count) must be >= 1");

  const bool is_ff = cc.model == "ff";
  std::optional<eia::Quantizer> quant;
  double gamma_r = 0.0, tau_r = 0.0;
  if (!is_ff) {
    gamma_r = resolved(sub->get_option("--gamma"), gamma, file, "gamma", 0.5);
    tau_r = resolved(sub->get_option("--tau"), tau, file, "tau", default_tau(cc.num_users));
    quant.emplace(gamma_r, tau_r);
  }

  eia::Rng root(cc.seed);
  auto sample_sequence = [&](eia::Rng rng) {
    std::vector<eia::ChannelState> states;
    states.reserve(std::size_t(cc.n));
    for (std::int64_t t = 0; t < cc.n; ++t) {
      states.push_back(is_ff ? eia::sample_ff_state(rng, cc.q, cc.num_users, t)
                             : eia::sample_gauss_state(rng, cc.num_users, t));
    }
    return states;
  };

  const auto states = sample_sequence(root.substream(eia::stream_tag::kState));
  const eia::PairingPlan plan = eia::build_pairing(states, eia::PairingMode::CausalFifo, quant);
  if (!plan_csv.empty()) {
    std::ofstream pc(plan_csv, std::ios::binary);
    if (!pc) throw std::runtime_error("cannot open plan csv file: " + plan_csv);
    plan.write_csv(pc);
  }

  json cfg{{"model", cc.model}, {"q", cc.q},        {"k", cc.num_users},   {"n", cc.n},
           {"seed", cc.seed},   {"delta", delta_r}, {"samples", trials}};
  if (!is_ff) {
    cfg["gamma"] = gamma_r;
    cfg["tau"] = tau_r;
  }

  json out = plan.summary_json();
  out["config"] = cfg;

  if (is_ff) {
    // empirical delta-typicality frequency against its probability lower bound
    const double alphabet = std::pow(double(cc.q - 1), double(cc.num_users) * double(cc.num_users));
    std::int64_t typical = 0;
    eia::Rng trial_root = root.substream(0x7472U);
    for (std::int64_t t = 0; t < trials; ++t) {
      auto seq = sample_sequence(trial_root.substream(std::uint64_t(t)));
      std::vector<std::string> keys;
      keys.reserve(seq.size());
      for (const auto& s : seq) keys.push_back(s.ff().key());
      typical += eia::is_delta_typical_uniform(eia::count_types(keys), alphabet, delta_r);
    }
    out["typicality"] = json{{"delta", delta_r},
                             {"alphabet_size", alphabet},
                             {"trials", trials},
                             {"empirical_frequency", double(typical) / double(trials)},
                             {"probability_bound", eia::typicality_probability_bound(cc.n, delta_r, alphabet)}};
  } else {
    out["typicality"] = json{{"skipped", "typicality is reported for finite-field runs only"}};
  }

  emit_json(out, common.output_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergodic interference alignment simulator"};
  app.require_subcommand(1);

  CommonArgs common;

  // simulate-ff
  std::uint32_t q = 5, k = 3;
  double rho = 0.0;
  std::int64_t n = 10000;
  std::uint64_t seed = 1;
  std::int64_t nprime = 1, m = -1;
  double code_rate = -1.0;
  std::string mode = "fifo", trace_path;

  auto* sim = app.add_subcommand("simulate-ff", "run the finite-field alignment protocol");
  sim->add_option("--q", q, "field size (odd prime)");
  sim->add_option("--k", k, "number of users");
  sim->add_option("--rho", rho, "noise probability");
  sim->add_option("--n", n, "total channel uses");
  sim->add_option("--seed", seed, "rng seed");
  sim->add_option("--nprime", nprime, "fading block length n' (codeword length)");
  sim->add_option("--m", m, "message symbols per pair group (default: n', uncoded)");
  sim->add_option("--code-rate", code_rate, "target code rate in bits per fresh use (sets m)");
  sim->add_option("--mode", mode, "pairing mode: fifo | offline");
  sim->add_option("--trace", trace_path, "write per-pair trace CSV to this path");

  // region
  std::string rates_str;
  auto* reg = app.add_subcommand("region", "capacity region membership query");
  reg->add_option("--q", q, "field size (odd prime)");
  reg->add_option("--rho", rho, "noise probability");
  reg->add_option("--rates", rates_str, "rate tuple as a JSON list, e.g. [1.2,0.3,0.3]");

  // sweep
  std::string grid_str = "-10:1:30";
  std::int64_t samples = 100000;
  auto* swp = app.add_subcommand("sweep", "achievable rate vs outer bound over an SNR grid");
  swp->add_option("--snr-db", grid_str, "grid: start:step:stop or comma list (dB)");
  swp->add_option("--samples", samples, "Monte Carlo samples per point");
  swp->add_option("--seed", seed, "rng seed");

  // pairing-stats
  std::string model = "ff", plan_csv;
  double gamma = 0.5, tau = 0.0, delta = 0.05;
  auto* ps = app.add_subcommand("pairing-stats", "matching and typicality statistics");
  ps->add_option("--model", model, "channel model: ff | gauss");
  ps->add_option("--q", q, "field size (odd prime, ff only)");
  ps->add_option("--k", k, "number of users");
  ps->add_option("--n", n, "sequence length");
  ps->add_option("--seed", seed, "rng seed");
  ps->add_option("--gamma", gamma, "quantizer pitch (gauss only)");
  ps->add_option("--tau", tau, "truncation radius (gauss only; default keeps discards < 1e-3)");
  ps->add_option("--delta", delta, "typicality tolerance");
  ps->add_option("--samples", samples, "typicality trial count (ff)");
  ps->add_option("--plan-csv", plan_csv, "write the per-slot pairing plan CSV to this path");

  for (auto* sub : {sim, reg, swp, ps}) {
    sub->add_option("--config", common.config_path, "JSON config file; flags override its values");
    sub->add_option("--output", common.output_path, "output path (.json/.csv); default stdout");
    sub->add_option("--threads", common.threads, "worker thread cap for Monte Carlo loops");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate_ff(sim, common, q, k, rho, n, seed, nprime, m, code_rate, mode, trace_path);
    }
    if (reg->parsed()) return cmd_region(reg, common, q, rho, rates_str);
    if (swp->parsed()) return cmd_sweep(swp, common, grid_str, samples, seed);
    if (ps->parsed()) {
      return cmd_pairing_stats(ps, common, model, q, k, n, seed, gamma, tau, delta, samples, plan_csv);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
