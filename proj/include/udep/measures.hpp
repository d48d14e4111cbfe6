#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "udep/kernels.hpp"
#include "udep/pairs.hpp"

namespace udep::measures {

enum class MeasureKind { hsic, chsic };

struct MeasureResult {
  double value = 0.0;  // clamped to >= 0 for reporting
  double raw = 0.0;    // unclamped, for numerical checks
  MeasureKind measure = MeasureKind::hsic;
  int L = 0;
  std::optional<double> alpha;               // absent for hsic
  std::optional<pairs::SelectionMode> mode;  // absent for hsic
  double bandwidth_x = 0.0;
  double bandwidth_y = 0.0;
};

// K x K symmetric matrix combining four kernel evaluations per entry, one
// per 4-tuple of samples induced by two virtual pairs. Positive
// semidefinite up to roundoff; Gaussian diagonal lies in [0, 2].
struct BreveGram {
  Eigen::MatrixXd values;
};

// Complete-kernel dependence measure: trace(PKPQ)/(L-1)^2 with P the
// centering projection, realized by double-centering the Gram matrices.
MeasureResult hsic(std::span<const double> x, std::span<const double> y,
                   const kernels::KernelSpec& kx, const kernels::KernelSpec& ky);

BreveGram breve_gram(std::span<const double> samples, const pairs::PairSelection& sel,
                     const kernels::KernelSpec& spec);

// Pruned-U-statistic dependence measure: trace(breve(K) breve(Q))/(4K^2),
// evaluated as an entrywise product sum without forming K x K matrices.
MeasureResult chsic(std::span<const double> x, std::span<const double> y,
                    const pairs::PairSelection& sel, const kernels::KernelSpec& kx,
                    const kernels::KernelSpec& ky);

// Reference evaluation of the same quantity: literal loop over pair
// couples with eight kernel calls per term and no reuse. Intended for
// K <= 512 as an independent cross-check of chsic.
MeasureResult chsic_naive(std::span<const double> x, std::span<const double> y,
                          const pairs::PairSelection& sel, const kernels::KernelSpec& kx,
                          const kernels::KernelSpec& ky);

// Cores working on precomputed square Grams; the sweep harness uses these
// to share one Gram pair across every measure within a trial.
double hsic_raw(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy);
double chsic_raw(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy,
                 const pairs::PairSelection& sel);

}  // namespace udep::measures
