#include "udep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fmt_util.hpp"
#include "udep/kernels.hpp"
#include "udep/measures.hpp"
#include "udep/rng.hpp"

namespace udep::harness {

namespace {

std::vector<double> sorted_alphas(const ExperimentConfig& cfg) {
  std::vector<double> alphas = cfg.alphas;
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  return alphas;
}

bool wants(const ExperimentConfig& cfg, MeasureSelector sel) {
  return std::find(cfg.measures.begin(), cfg.measures.end(), sel) != cfg.measures.end();
}

bool needs_alphas(const ExperimentConfig& cfg) {
  return wants(cfg, MeasureSelector::chsic_confounder) ||
         wants(cfg, MeasureSelector::chsic_random);
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.measures.empty()) throw ConfigError("no measures requested");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");

  const bool gamma_swept = cfg.axis == SweepAxis::gamma_db;
  if (gamma_swept) {
    if (cfg.gamma_db.empty()) throw ConfigError("gamma sweep needs at least one gamma value");
    if (cfg.sample_counts.size() != 1) {
      throw ConfigError("gamma sweep needs exactly one fixed L");
    }
  } else {
    if (cfg.sample_counts.empty()) throw ConfigError("L sweep needs at least one L value");
    if (cfg.gamma_db.size() != 1) throw ConfigError("L sweep needs exactly one fixed gamma");
  }

  for (double g : cfg.gamma_db) {
    if (!std::isfinite(g)) throw ConfigError("gamma_db values must be finite");
  }
  int min_L = 0;
  for (int L : cfg.sample_counts) {
    if (L < 2) throw ConfigError("sample counts must be >= 2");
    min_L = (min_L == 0) ? L : std::min(min_L, L);
  }

  if (needs_alphas(cfg)) {
    if (cfg.alphas.empty()) throw ConfigError("pruned measures need at least one alpha");
    for (double a : cfg.alphas) {
      if (!std::isfinite(a) || a < 1.0 || a > static_cast<double>(min_L - 1)) {
        throw ConfigError("alpha values must lie in [1, min(L)-1]");
      }
    }
  }
}

std::vector<Series> series_list(const ExperimentConfig& cfg) {
  std::vector<Series> series;
  const auto alphas = sorted_alphas(cfg);
  if (wants(cfg, MeasureSelector::hsic)) {
    series.push_back({MeasureSelector::hsic, std::nullopt});
  }
  if (wants(cfg, MeasureSelector::chsic_confounder)) {
    for (double a : alphas) series.push_back({MeasureSelector::chsic_confounder, a});
  }
  if (wants(cfg, MeasureSelector::chsic_random)) {
    for (double a : alphas) series.push_back({MeasureSelector::chsic_random, a});
  }
  return series;
}

std::vector<double> run_trial(const ExperimentConfig& cfg, const TrialPoint& point,
                              int trial_index) {
  const std::uint64_t trial_seed =
      rng::splitmix64_at(cfg.master_seed, static_cast<std::uint64_t>(trial_index));

  const synth::ModelConfig model_cfg{cfg.model, point.gamma_db, point.L};
  const synth::Dataset data = synth::generate(model_cfg, rng::splitmix64_at(trial_seed, 0));

  // One kernel pair per trial: bandwidths come from all L original samples
  // so pruning cannot distort the marginal length scales.
  const kernels::KernelSpec kx{kernels::KernelFamily::gaussian,
                               kernels::bandwidth(data.x, point.L)};
  const kernels::KernelSpec ky{kernels::KernelFamily::gaussian,
                               kernels::bandwidth(data.y, point.L)};
  const auto gx = kernels::gram(data.x, data.x, kx);
  const auto gy = kernels::gram(data.y, data.y, ky);

  const auto alphas = sorted_alphas(cfg);
  std::optional<pairs::ConfounderOrder> order;
  if (wants(cfg, MeasureSelector::chsic_confounder)) {
    order = pairs::confounder_order(data.z);
  }

  std::vector<double> values;
  for (const Series& series : series_list(cfg)) {
    double raw = 0.0;
    switch (series.selector) {
      case MeasureSelector::hsic:
        raw = measures::hsic_raw(gx.values, gy.values);
        break;
      case MeasureSelector::chsic_confounder: {
        const int budget = pairs::pair_budget(point.L, *series.alpha);
        const auto sel = pairs::select_confounder(*order, budget, series.alpha);
        raw = measures::chsic_raw(gx.values, gy.values, sel);
        break;
      }
      case MeasureSelector::chsic_random: {
        const auto alpha_it = std::find(alphas.begin(), alphas.end(), *series.alpha);
        const auto alpha_index =
            static_cast<std::uint64_t>(alpha_it - alphas.begin());
        const std::uint64_t sel_seed = rng::splitmix64_at(trial_seed, 1 + alpha_index);
        const int budget = pairs::pair_budget(point.L, *series.alpha);
        const auto sel = pairs::select_random(point.L, budget, sel_seed, series.alpha);
        raw = measures::chsic_raw(gx.values, gy.values, sel);
        break;
      }
    }
    values.push_back(raw < 0.0 ? 0.0 : raw);
  }
  return values;
}

SweepResult sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto series = series_list(cfg);

  std::vector<TrialPoint> points;
  if (cfg.axis == SweepAxis::gamma_db) {
    auto gammas = cfg.gamma_db;
    std::sort(gammas.begin(), gammas.end());
    for (double g : gammas) points.push_back({g, cfg.sample_counts.front()});
  } else {
    auto counts = cfg.sample_counts;
    std::sort(counts.begin(), counts.end());
    for (int L : counts) points.push_back({cfg.gamma_db.front(), L});
  }

  // values[p][s][t]
  std::vector<std::vector<std::vector<double>>> values(
      points.size(), std::vector<std::vector<double>>(
                         series.size(), std::vector<double>(
                                            static_cast<std::size_t>(cfg.trials))));
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (int t = 0; t < cfg.trials; ++t) {
      const auto trial = run_trial(cfg, points[p], t);
      for (std::size_t s = 0; s < series.size(); ++s) {
        values[p][s][static_cast<std::size_t>(t)] = trial[s];
      }
    }
  }

  SweepResult result;
  result.axis = cfg.axis;
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto& samples = values[p][s];
      const auto n = static_cast<double>(samples.size());
      double mean = 0.0;
      for (double v : samples) mean += v;
      mean /= n;
      double ssq = 0.0;
      for (double v : samples) {
        const double d = v - mean;
        ssq += d * d;
      }
      const double stddev = samples.size() > 1 ? std::sqrt(ssq / (n - 1.0)) : 0.0;

      SweepRow row;
      row.model = cfg.model;
      row.selector = series[s].selector;
      row.alpha = series[s].alpha;
      row.L = points[p].L;
      row.gamma_db = points[p].gamma_db;
      row.trials = cfg.trials;
      row.mean = mean;
      row.stddev = stddev;
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "model,measure,mode,alpha,L,gamma_db,trials,mean,std\n";
  for (const auto& row : result.rows) {
    out << model_name(row.model) << ',' << measure_name(row.selector) << ','
        << mode_name(row.selector) << ','
        << (row.alpha ? detail::format_g17(*row.alpha) : std::string()) << ','
        << row.L << ',' << detail::format_g17(row.gamma_db) << ',' << row.trials
        << ',' << detail::format_g17(row.mean) << ','
        << detail::format_g17(row.stddev) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

bool SelfTestReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SelfTestCheck& c) { return c.pass; });
}

void print_report(const SelfTestReport& report, std::ostream& out) {
  for (const auto& check : report.checks) {
    out << (check.pass ? "[PASS] " : "[FAIL] ") << check.name
        << ": measured=" << detail::format_g6(check.measured)
        << " threshold=" << detail::format_g6(check.threshold);
    if (!check.detail.empty()) out << " (" << check.detail << ")";
    out << '\n';
  }
}

std::string model_name(synth::Model model) {
  return model == synth::Model::mplus ? "mplus" : "mminus";
}

std::string measure_name(MeasureSelector selector) {
  return selector == MeasureSelector::hsic ? "hsic" : "chsic";
}

std::string mode_name(MeasureSelector selector) {
  switch (selector) {
    case MeasureSelector::hsic: return "";
    case MeasureSelector::chsic_confounder: return "confounder";
    case MeasureSelector::chsic_random: return "random";
  }
  return "";
}

}  // namespace udep::harness
