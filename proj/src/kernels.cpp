#include "udep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace udep::kernels {

namespace {

void require_finite(std::span<const double> samples, const char* what) {
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw InvalidInput(std::string(what) + " contains a non-finite value");
    }
  }
}

void require_valid(const KernelSpec& spec) {
  if (!(spec.bandwidth > 0.0) || !std::isfinite(spec.bandwidth)) {
    throw InvalidInput("kernel bandwidth must be positive and finite");
  }
}

double gauss(double s, double bw) {
  const double t = s / bw;
  return std::exp(-t * t);
}

}  // namespace

double bandwidth(std::span<const double> samples, int rule_L) {
  if (samples.size() < 2) throw InsufficientData("bandwidth needs at least 2 samples");
  if (rule_L < 2) throw InvalidInput("bandwidth rule_L must be >= 2");
  require_finite(samples, "bandwidth samples");

  const auto n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ssq = 0.0;
  for (double v : samples) {
    const double d = v - mean;
    ssq += d * d;
  }
  const double sigma = std::sqrt(ssq / (n - 1.0));
  if (sigma == 0.0) throw DegenerateData("zero-variance samples give a zero bandwidth");
  return sigma * std::pow(static_cast<double>(rule_L), -0.2);
}

double kappa(double s, const KernelSpec& spec) {
  require_valid(spec);
  if (!std::isfinite(s)) throw InvalidInput("kappa argument is not finite");
  return gauss(s, spec.bandwidth);
}

GramMatrix gram(std::span<const double> rows, std::span<const double> cols,
                const KernelSpec& spec) {
  require_valid(spec);
  if (rows.empty() || cols.empty()) throw InvalidInput("gram arrays must be non-empty");
  require_finite(rows, "gram rows");
  require_finite(cols, "gram cols");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(cols.size());
  const double bw = spec.bandwidth;

  GramMatrix out;
  out.same_index_set =
      rows.size() == cols.size() &&
      (rows.data() == cols.data() || std::equal(rows.begin(), rows.end(), cols.begin()));
  out.values.resize(n, m);

  if (out.same_index_set) {
    // Upper triangle plus mirror keeps the square case exactly symmetric.
    for (Eigen::Index i = 0; i < n; ++i) {
      out.values(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < m; ++j) {
        const double v = gauss(rows[static_cast<std::size_t>(i)] -
                                   cols[static_cast<std::size_t>(j)],
                               bw);
        out.values(i, j) = v;
        out.values(j, i) = v;
      }
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        out.values(i, j) = gauss(rows[static_cast<std::size_t>(i)] -
                                     cols[static_cast<std::size_t>(j)],
                                 bw);
      }
    }
  }
  return out;
}

}  // namespace udep::kernels
