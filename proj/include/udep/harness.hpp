#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "udep/synth.hpp"

namespace udep::harness {

enum class MeasureSelector { hsic, chsic_confounder, chsic_random };

enum class SweepAxis { gamma_db, sample_count };

// Monte-Carlo sweep over gamma (fixed L) or over L (fixed gamma). The
// non-swept list must hold exactly one value.
struct ExperimentConfig {
  synth::Model model = synth::Model::mplus;
  std::vector<MeasureSelector> measures;
  std::vector<double> alphas;
  SweepAxis axis = SweepAxis::gamma_db;
  std::vector<double> gamma_db;
  std::vector<int> sample_counts;
  int trials = 500;
  std::uint64_t master_seed = 0;
  std::filesystem::path out_dir = ".";  // where sweep outputs land
};

// One curve of the experiment: a measure plus, for the pruned measures,
// its alpha. hsic carries no alpha.
struct Series {
  MeasureSelector selector = MeasureSelector::hsic;
  std::optional<double> alpha;
};

struct TrialPoint {
  double gamma_db = 10.0;
  int L = 100;
};

struct SweepRow {
  synth::Model model = synth::Model::mplus;
  MeasureSelector selector = MeasureSelector::hsic;
  std::optional<double> alpha;
  int L = 0;
  double gamma_db = 0.0;
  int trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::gamma_db;
  std::vector<SweepRow> rows;
};

// Throws ConfigError when the sweep is ill-formed (no measures, both or
// neither axis swept, trials < 1, alphas outside [1, min(L)-1], ...).
void validate(const ExperimentConfig& cfg);

// Canonical series order: hsic, then chsic (confounder) by alpha
// ascending, then chsic (random) by alpha ascending.
std::vector<Series> series_list(const ExperimentConfig& cfg);

// One Monte-Carlo trial at one sweep point: generates a dataset from the
// trial sub-seed, computes every requested series on that same dataset and
// returns the values aligned with series_list(cfg).
//
// Seed derivation (all via rng::splitmix64_at): the trial sub-seed is
// child `trial_index` of the master seed; the dataset stream is child 0 of
// the trial sub-seed; random pruning for alpha index a is child 1 + a.
std::vector<double> run_trial(const ExperimentConfig& cfg, const TrialPoint& point,
                              int trial_index);

// Mean and sample standard deviation per (series, sweep point), rows
// ordered by (series, sweep value ascending). Deterministic given the
// configuration.
SweepResult sweep(const ExperimentConfig& cfg);

// Header "model,measure,mode,alpha,L,gamma_db,trials,mean,std"; floats use
// 17 significant digits; one newline-terminated line per row.
void write_csv(const SweepResult& result, const std::filesystem::path& path);

// Static SVG chart: swept variable on x, one mean line with a +/- one
// standard deviation band per series. A pure function of the result.
void render_chart(const SweepResult& result, const std::filesystem::path& path);

struct SelfTestCheck {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;

  bool all_passed() const;
};

// Finite-M convergence checks of the steering-vector oracle plus the
// complete-selection identity between the pruned and complete measures.
// Failures are reported, never thrown.
SelfTestReport self_test();

void print_report(const SelfTestReport& report, std::ostream& out);

std::string model_name(synth::Model model);
std::string measure_name(MeasureSelector selector);  // CSV "measure" column
std::string mode_name(MeasureSelector selector);     // CSV "mode" column

}  // namespace udep::harness
