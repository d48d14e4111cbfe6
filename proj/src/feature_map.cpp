#include "udep/feature_map.hpp"

#include <cmath>
#include <numbers>

namespace udep::feature_map {

namespace {

void require_valid(const SteeringConfig& cfg) {
  if (cfg.M < 2 || cfg.M % 2 != 0) throw InvalidInput("steering dimension M must be even and >= 2");
  if (!(cfg.bandwidth > 0.0) || !std::isfinite(cfg.bandwidth)) {
    throw InvalidInput("steering bandwidth must be positive and finite");
  }
}

// Compensated (Kahan) accumulator; the Darboux sums run to M = 2^14 terms
// and their residual against the closed-form kernel is measured near the
// roundoff floor.
struct KahanSum {
  double total = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double y = v - carry;
    const double t = total + y;
    carry = (t - total) - y;
    total = t;
  }
};

double window_value(double f, double bandwidth) {
  const double a = std::numbers::pi * bandwidth * f;
  return std::pow(std::numbers::pi, 0.25) * std::sqrt(bandwidth) * std::exp(-0.5 * a * a);
}

}  // namespace

double window(double f, const SteeringConfig& cfg) {
  require_valid(cfg);
  return window_value(f, cfg.bandwidth);
}

double discrete_window_norm(const SteeringConfig& cfg) {
  require_valid(cfg);
  const double root_m = std::sqrt(static_cast<double>(cfg.M));
  const double scale = std::sqrt(std::numbers::pi) * cfg.bandwidth;
  KahanSum sum;
  for (int m = -cfg.M / 2; m < cfg.M / 2; ++m) {
    const double f = static_cast<double>(m) / root_m;
    const double a = std::numbers::pi * cfg.bandwidth * f;
    sum.add(scale * std::exp(-a * a) / root_m);
  }
  return sum.total;
}

Eigen::VectorXcd steer(double x, const SteeringConfig& cfg) {
  require_valid(cfg);
  if (!std::isfinite(x)) throw InvalidInput("steer sample is not finite");

  const double root_m = std::sqrt(static_cast<double>(cfg.M));
  const double amp = std::pow(static_cast<double>(cfg.M), -0.25);
  Eigen::VectorXcd out(cfg.M);
  for (int m = -cfg.M / 2; m < cfg.M / 2; ++m) {
    const double f = static_cast<double>(m) / root_m;
    const double phase = 2.0 * std::numbers::pi * f * x;
    out(m + cfg.M / 2) = std::polar(amp * window_value(f, cfg.bandwidth), phase);
  }
  return out;
}

FeatureMatrix map_samples(std::span<const double> xs, const SteeringConfig& cfg) {
  require_valid(cfg);
  if (xs.empty()) throw InvalidInput("map_samples needs at least one sample");
  FeatureMatrix out;
  out.values.resize(cfg.M, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t l = 0; l < xs.size(); ++l) {
    out.values.col(static_cast<Eigen::Index>(l)) = steer(xs[l], cfg);
  }
  return out;
}

double finite_m_kernel(double x, double x2, const SteeringConfig& cfg) {
  require_valid(cfg);
  if (!std::isfinite(x) || !std::isfinite(x2)) {
    throw InvalidInput("finite_m_kernel samples must be finite");
  }

  const double s = x - x2;
  const double root_m = std::sqrt(static_cast<double>(cfg.M));
  const double scale = std::sqrt(std::numbers::pi) * cfg.bandwidth;
  KahanSum sum;
  for (int m = -cfg.M / 2; m < cfg.M / 2; ++m) {
    const double f = static_cast<double>(m) / root_m;
    const double a = std::numbers::pi * cfg.bandwidth * f;
    const double weight = scale * std::exp(-a * a) / root_m;
    sum.add(weight * std::cos(2.0 * std::numbers::pi * f * s));
  }
  return sum.total;
}

CovMatrix sample_cov(const FeatureMatrix& u, const FeatureMatrix& v) {
  const Eigen::Index n = u.values.cols();
  if (n != v.values.cols() || u.values.rows() != v.values.rows()) {
    throw ShapeError("feature matrices must have matching dimensions");
  }
  if (n < 2) throw InsufficientData("sample_cov needs at least 2 columns");

  const Eigen::VectorXcd mu = u.values.rowwise().mean();
  const Eigen::VectorXcd mv = v.values.rowwise().mean();
  const Eigen::MatrixXcd uc = u.values.colwise() - mu;
  const Eigen::MatrixXcd vc = v.values.colwise() - mv;

  CovMatrix out;
  out.values.noalias() = uc * vc.adjoint() / static_cast<double>(n - 1);
  return out;
}

double cov_frobenius_sq(const CovMatrix& c) { return c.values.squaredNorm(); }

CovMatrix incomplete_cov(const FeatureMatrix& u, const FeatureMatrix& v,
                         const pairs::PairSelection& sel) {
  const Eigen::Index n = u.values.cols();
  if (n != v.values.cols() || u.values.rows() != v.values.rows()) {
    throw ShapeError("feature matrices must have matching dimensions");
  }
  if (sel.size() == 0) throw InsufficientData("empty pair selection");
  if (sel.L != static_cast<int>(n)) {
    throw ShapeError("pair selection was built for a different sample count");
  }

  const int K = sel.size();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXcd ur(u.values.rows(), K);
  Eigen::MatrixXcd vr(v.values.rows(), K);
  for (int k = 0; k < K; ++k) {
    const auto i = static_cast<Eigen::Index>(sel.f1[static_cast<std::size_t>(k)]);
    const auto j = static_cast<Eigen::Index>(sel.f2[static_cast<std::size_t>(k)]);
    if (i < 0 || j < 0 || i >= n || j >= n) throw ShapeError("pair selection index out of range");
    ur.col(k) = (u.values.col(i) - u.values.col(j)) * inv_sqrt2;
    vr.col(k) = (v.values.col(i) - v.values.col(j)) * inv_sqrt2;
  }

  CovMatrix out;
  out.values.noalias() = ur * vr.adjoint() / static_cast<double>(K);
  return out;
}

}  // namespace udep::feature_map
