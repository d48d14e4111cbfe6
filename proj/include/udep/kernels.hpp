#pragma once

#include <Eigen/Dense>
#include <span>

#include "udep/errors.hpp"

namespace udep::kernels {

enum class KernelFamily { gaussian };

// Translation-invariant kernel: family plus length scale. The evaluated
// kernel satisfies kappa(0) = 1, kappa(s) = kappa(-s), |kappa(s)| <= 1 and
// kappa(s) -> 0 as |s| -> infinity.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double bandwidth = 1.0;  // > 0, same units as the data it is applied to
};

// Kernel evaluations kappa(rows[i] - cols[j]). `same_index_set` records
// whether rows and columns are the same sample list; square Grams built
// from one list are symmetric with unit diagonal and positive semidefinite
// up to numerical tolerance.
struct GramMatrix {
  Eigen::MatrixXd values;
  bool same_index_set = false;
};

// Data-driven length scale: sample standard deviation (1/(n-1)
// normalization) times rule_L^(-1/5).
double bandwidth(std::span<const double> samples, int rule_L);

double kappa(double s, const KernelSpec& spec);

GramMatrix gram(std::span<const double> rows, std::span<const double> cols,
                const KernelSpec& spec);

}  // namespace udep::kernels
