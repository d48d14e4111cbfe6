// udep: dependence measures with confounder-controlled U-statistic pruning.
//
// Subcommands:
//   sweep      Monte-Carlo sweep over gamma (fixed L) or L (fixed gamma);
//              writes <model>_<sweep>.csv and <model>_<sweep>.svg.
//   measure    hsic and chsic on a CSV file with columns x,y,z.
//   self-test  numerical cross-checks of the finite-M oracle and the
//              complete-selection identity.
//
// Exit codes: 0 success, 1 failed self-test, 2 configuration error,
// 3 data error, 4 I/O error.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "udep/harness.hpp"
#include "udep/kernels.hpp"
#include "udep/measures.hpp"
#include "udep/pairs.hpp"
#include "udep/synth.hpp"
#include "udep/version.hpp"

namespace {

using udep::harness::ExperimentConfig;
using udep::harness::MeasureSelector;
using udep::harness::SweepAxis;

std::vector<double> expand_token(const std::string& token) {
  const auto first = token.find(':');
  if (first == std::string::npos) return {std::stod(token)};

  // start:stop:step grid, stop included up to roundoff slack.
  const auto second = token.find(':', first + 1);
  if (second == std::string::npos) {
    throw udep::ConfigError("range must be start:stop:step, got '" + token + "'");
  }
  const double start = std::stod(token.substr(0, first));
  const double stop = std::stod(token.substr(first + 1, second - first - 1));
  const double step = std::stod(token.substr(second + 1));
  if (step <= 0.0 || stop < start) {
    throw udep::ConfigError("range needs step > 0 and stop >= start: '" + token + "'");
  }
  std::vector<double> values;
  for (double v = start; v <= stop + step * 1e-9; v += step) values.push_back(v);
  return values;
}

std::vector<double> parse_grid(const std::vector<std::string>& tokens) {
  std::vector<double> values;
  for (const auto& token : tokens) {
    try {
      const auto part = expand_token(token);
      values.insert(values.end(), part.begin(), part.end());
    } catch (const std::invalid_argument&) {
      throw udep::ConfigError("not a number: '" + token + "'");
    } catch (const std::out_of_range&) {
      throw udep::ConfigError("number out of range: '" + token + "'");
    }
  }
  return values;
}

std::vector<int> parse_int_grid(const std::vector<std::string>& tokens) {
  std::vector<int> values;
  for (double v : parse_grid(tokens)) {
    if (v != std::floor(v) || v < 0.0 || v > 1e9) {
      throw udep::ConfigError("expected a whole sample count, got " +
                              std::to_string(v));
    }
    values.push_back(static_cast<int>(v));
  }
  return values;
}

std::vector<MeasureSelector> parse_measures(const std::vector<std::string>& tokens) {
  std::vector<MeasureSelector> out;
  for (const auto& token : tokens) {
    if (token == "hsic") {
      out.push_back(MeasureSelector::hsic);
    } else if (token == "chsic") {
      out.push_back(MeasureSelector::chsic_confounder);
    } else if (token == "chsic-random") {
      out.push_back(MeasureSelector::chsic_random);
    } else {
      throw udep::ConfigError("unknown measure '" + token +
                              "' (expected hsic, chsic or chsic-random)");
    }
  }
  return out;
}

// Lets `--gamma-db -10:20:2` work in the spaced form: a value token that
// starts with a minus would otherwise be read as an option name.
std::vector<std::string> glue_negative_values(int argc, char** argv) {
  const std::vector<std::string> list_opts = {"--gamma-db", "--alpha", "--L",
                                              "--gamma-db-fixed"};
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    const bool is_list_opt =
        std::find(list_opts.begin(), list_opts.end(), arg) != list_opts.end();
    if (is_list_opt && i + 1 < argc) {
      const std::string next = argv[i + 1];
      if (next.size() >= 2 && next[0] == '-' &&
          (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
        args.push_back(arg + "=" + next);
        ++i;
        continue;
      }
    }
    args.push_back(std::move(arg));
  }
  return args;
}

int run_sweep(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw udep::IoError("cannot create output directory " + cfg.out_dir.string() +
                        ": " + ec.message());
  }
  const auto result = udep::harness::sweep(cfg);

  const std::string stem = udep::harness::model_name(cfg.model) + "_" +
                           (cfg.axis == SweepAxis::gamma_db ? "gamma" : "L");
  const auto csv_path = cfg.out_dir / (stem + ".csv");
  const auto svg_path = cfg.out_dir / (stem + ".svg");
  udep::harness::write_csv(result, csv_path);
  udep::harness::render_chart(result, svg_path);
  std::cout << "wrote " << csv_path.string() << '\n'
            << "wrote " << svg_path.string() << '\n';
  return 0;
}

int run_measure(const std::string& input, double alpha, bool random_pruning,
                std::uint64_t seed) {
  const auto data = udep::synth::read_csv(input);
  const int L = data.size();

  const udep::kernels::KernelSpec kx{udep::kernels::KernelFamily::gaussian,
                                     udep::kernels::bandwidth(data.x, L)};
  const udep::kernels::KernelSpec ky{udep::kernels::KernelFamily::gaussian,
                                     udep::kernels::bandwidth(data.y, L)};

  const int budget = udep::pairs::pair_budget(L, alpha);
  udep::pairs::PairSelection sel;
  if (random_pruning) {
    sel = udep::pairs::select_random(L, budget, seed, alpha);
  } else {
    sel = udep::pairs::select_confounder(udep::pairs::confounder_order(data.z),
                                         budget, alpha);
  }

  const auto marginal = udep::measures::hsic(data.x, data.y, kx, ky);
  const auto conditional = udep::measures::chsic(data.x, data.y, sel, kx, ky);

  char line[256];
  std::cout << "measure,mode,alpha,L,value,bandwidth_x,bandwidth_y\n";
  std::snprintf(line, sizeof(line), "hsic,,,%d,%.17g,%.17g,%.17g\n", L,
                marginal.value, kx.bandwidth, ky.bandwidth);
  std::cout << line;
  std::snprintf(line, sizeof(line), "chsic,%s,%.17g,%d,%.17g,%.17g,%.17g\n",
                random_pruning ? "random" : "confounder", alpha, L,
                conditional.value, kx.bandwidth, ky.bandwidth);
  std::cout << line;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependence measures with confounder-controlled U-statistic pruning"};
  app.set_version_flag("--version", std::string("udep ") + udep::kVersion);
  app.require_subcommand(0, 1);
  app.set_config("--config", "",
                 "declarative INI config; sweep keys live under a [sweep] "
                 "section, command-line flags override file values");

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over gamma or L");
  sweep_cmd->fallthrough();
  std::string model_str = "mplus";
  std::vector<std::string> measure_tokens = {"hsic", "chsic", "chsic-random"};
  std::vector<std::string> alpha_tokens = {"4", "64"};
  std::vector<std::string> gamma_tokens;
  std::vector<std::string> l_tokens;
  double gamma_fixed = 10.0;
  int l_fixed = 100;
  int trials = 500;
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  sweep_cmd->add_option("--model", model_str, "synthetic model")
      ->check(CLI::IsMember({"mplus", "mminus"}))
      ->capture_default_str();
  sweep_cmd->add_option("--measures", measure_tokens,
                        "measures: hsic, chsic, chsic-random")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--alpha", alpha_tokens, "pruning factors, in [1, L-1]")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--gamma-db", gamma_tokens,
                        "swept gamma grid in dB (list or start:stop:step); "
                        "default -10:20:2 when --L is not given")
      ->delimiter(',');
  sweep_cmd->add_option("--L", l_tokens,
                        "swept sample-count grid (list or start:stop:step)")
      ->delimiter(',');
  sweep_cmd->add_option("--gamma-db-fixed", gamma_fixed,
                        "fixed gamma (dB) for an L sweep")
      ->capture_default_str();
  sweep_cmd->add_option("--L-fixed", l_fixed, "fixed sample count for a gamma sweep")
      ->capture_default_str();
  sweep_cmd->add_option("--trials", trials, "Monte-Carlo trials per sweep point")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  sweep_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();

  // --- measure ---
  auto* measure_cmd =
      app.add_subcommand("measure", "measures on a CSV file with columns x,y,z");
  std::string input;
  double measure_alpha = 4.0;
  bool random_pruning = false;
  std::uint64_t measure_seed = 0;
  measure_cmd->add_option("--input", input, "input CSV path")->required();
  measure_cmd->add_option("--alpha", measure_alpha, "pruning factor, in [1, L-1]")
      ->required();
  measure_cmd->add_flag("--random-pruning", random_pruning,
                        "prune pairs at random instead of by the confounder");
  measure_cmd->add_option("--seed", measure_seed, "selection seed for --random-pruning")
      ->capture_default_str();

  // --- self-test ---
  auto* selftest_cmd =
      app.add_subcommand("self-test", "numerical cross-checks of the build");

  const auto args = glue_negative_values(argc, argv);
  try {
    std::vector<const char*> argv2;
    argv2.push_back(argv[0]);
    for (const auto& a : args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sweep_cmd->parsed()) {
      if (!gamma_tokens.empty() && !l_tokens.empty()) {
        throw udep::ConfigError("choose one sweep axis: --gamma-db or --L");
      }
      ExperimentConfig cfg;
      cfg.model = model_str == "mplus" ? udep::synth::Model::mplus
                                       : udep::synth::Model::mminus;
      cfg.measures = parse_measures(measure_tokens);
      cfg.alphas = parse_grid(alpha_tokens);
      cfg.trials = trials;
      cfg.master_seed = seed;
      cfg.out_dir = out_dir;
      if (!l_tokens.empty()) {
        cfg.axis = SweepAxis::sample_count;
        cfg.sample_counts = parse_int_grid(l_tokens);
        cfg.gamma_db = {gamma_fixed};
      } else {
        cfg.axis = SweepAxis::gamma_db;
        cfg.gamma_db = gamma_tokens.empty() ? expand_token("-10:20:2")
                                            : parse_grid(gamma_tokens);
        cfg.sample_counts = {l_fixed};
      }
      return run_sweep(cfg);
    }
    if (measure_cmd->parsed()) {
      return run_measure(input, measure_alpha, random_pruning, measure_seed);
    }
    if (selftest_cmd->parsed()) {
      const auto report = udep::harness::self_test();
      udep::harness::print_report(report, std::cout);
      return report.all_passed() ? 0 : 1;
    }
    std::cout << app.help();
    return 0;
  } catch (const udep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const udep::InvalidAlpha& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const udep::InvalidBudget& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const udep::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const udep::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
