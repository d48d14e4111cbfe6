#include "udep/measures.hpp"

namespace udep::measures {

namespace {

void require_aligned(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("x and y must have equal length");
  if (x.size() < 2) throw InsufficientData("measures need at least 2 samples");
}

void require_selection(const pairs::PairSelection& sel, std::size_t L) {
  if (sel.size() == 0) throw InsufficientData("empty pair selection");
  if (sel.L != static_cast<int>(L)) {
    throw ShapeError("pair selection was built for a different sample count");
  }
  for (int k = 0; k < sel.size(); ++k) {
    const int i = sel.f1[static_cast<std::size_t>(k)];
    const int j = sel.f2[static_cast<std::size_t>(k)];
    if (i < 0 || j < 0 || i >= sel.L || j >= sel.L || i == j) {
      throw ShapeError("pair selection index out of range");
    }
  }
}

double clamp_nonneg(double v) { return v < 0.0 ? 0.0 : v; }

MeasureResult make_result(double raw, MeasureKind kind, int L,
                          std::optional<double> alpha,
                          std::optional<pairs::SelectionMode> mode, double bw_x,
                          double bw_y) {
  MeasureResult r;
  r.raw = raw;
  r.value = clamp_nonneg(raw);
  r.measure = kind;
  r.L = L;
  r.alpha = alpha;
  r.mode = mode;
  r.bandwidth_x = bw_x;
  r.bandwidth_y = bw_y;
  return r;
}

}  // namespace

double hsic_raw(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy) {
  const Eigen::Index L = gx.rows();
  const Eigen::VectorXd mx = gx.rowwise().mean();
  const Eigen::VectorXd my = gy.rowwise().mean();
  const double gmx = mx.mean();
  const double gmy = my.mean();

  // Entrywise sum of the two double-centered Grams. Centering both keeps
  // the value exactly symmetric in (x, y).
  double acc = 0.0;
  for (Eigen::Index j = 0; j < L; ++j) {
    for (Eigen::Index i = 0; i < L; ++i) {
      const double kc = gx(i, j) - mx(i) - mx(j) + gmx;
      const double qc = gy(i, j) - my(i) - my(j) + gmy;
      acc += kc * qc;
    }
  }
  const auto denom = static_cast<double>(L - 1);
  return acc / (denom * denom);
}

double chsic_raw(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy,
                 const pairs::PairSelection& sel) {
  const int K = sel.size();
  const auto* f1 = sel.f1.data();
  const auto* f2 = sel.f2.data();

  // Second pair index outside: the inner loop then reads eight fixed
  // columns of the column-major Grams, which keeps it cache-resident.
  double acc = 0.0;
  for (int kp = 0; kp < K; ++kp) {
    const double* gx1 = gx.col(f1[kp]).data();
    const double* gx2 = gx.col(f2[kp]).data();
    const double* gy1 = gy.col(f1[kp]).data();
    const double* gy2 = gy.col(f2[kp]).data();
    for (int k = 0; k < K; ++k) {
      const int a1 = f1[k];
      const int a2 = f2[k];
      const double kb = gx1[a1] + gx2[a2] - gx2[a1] - gx1[a2];
      const double qb = gy1[a1] + gy2[a2] - gy2[a1] - gy1[a2];
      acc += kb * qb;
    }
  }
  const auto kd = static_cast<double>(K);
  return acc / (4.0 * kd * kd);
}

MeasureResult hsic(std::span<const double> x, std::span<const double> y,
                   const kernels::KernelSpec& kx, const kernels::KernelSpec& ky) {
  require_aligned(x, y);
  const auto gx = kernels::gram(x, x, kx);
  const auto gy = kernels::gram(y, y, ky);
  const double raw = hsic_raw(gx.values, gy.values);
  return make_result(raw, MeasureKind::hsic, static_cast<int>(x.size()), std::nullopt,
                     std::nullopt, kx.bandwidth, ky.bandwidth);
}

BreveGram breve_gram(std::span<const double> samples, const pairs::PairSelection& sel,
                     const kernels::KernelSpec& spec) {
  require_selection(sel, samples.size());
  const auto g = kernels::gram(samples, samples, spec);
  const int K = sel.size();

  BreveGram out;
  out.values.resize(K, K);
  // Upper triangle plus mirror: exact symmetry by construction.
  for (int k = 0; k < K; ++k) {
    const int a1 = sel.f1[static_cast<std::size_t>(k)];
    const int a2 = sel.f2[static_cast<std::size_t>(k)];
    for (int kp = k; kp < K; ++kp) {
      const int b1 = sel.f1[static_cast<std::size_t>(kp)];
      const int b2 = sel.f2[static_cast<std::size_t>(kp)];
      const double v = g.values(a1, b1) + g.values(a2, b2) - g.values(a1, b2) -
                       g.values(a2, b1);
      out.values(k, kp) = v;
      out.values(kp, k) = v;
    }
  }
  return out;
}

MeasureResult chsic(std::span<const double> x, std::span<const double> y,
                    const pairs::PairSelection& sel, const kernels::KernelSpec& kx,
                    const kernels::KernelSpec& ky) {
  require_aligned(x, y);
  require_selection(sel, x.size());
  const auto gx = kernels::gram(x, x, kx);
  const auto gy = kernels::gram(y, y, ky);
  const double raw = chsic_raw(gx.values, gy.values, sel);
  return make_result(raw, MeasureKind::chsic, static_cast<int>(x.size()), sel.alpha,
                     sel.mode, kx.bandwidth, ky.bandwidth);
}

MeasureResult chsic_naive(std::span<const double> x, std::span<const double> y,
                          const pairs::PairSelection& sel, const kernels::KernelSpec& kx,
                          const kernels::KernelSpec& ky) {
  require_aligned(x, y);
  require_selection(sel, x.size());
  const int K = sel.size();

  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto a1 = static_cast<std::size_t>(sel.f1[static_cast<std::size_t>(k)]);
    const auto a2 = static_cast<std::size_t>(sel.f2[static_cast<std::size_t>(k)]);
    for (int kp = 0; kp < K; ++kp) {
      const auto b1 = static_cast<std::size_t>(sel.f1[static_cast<std::size_t>(kp)]);
      const auto b2 = static_cast<std::size_t>(sel.f2[static_cast<std::size_t>(kp)]);
      const double kb = (kernels::kappa(x[a1] - x[b1], kx) - kernels::kappa(x[a1] - x[b2], kx)) +
                        (kernels::kappa(x[a2] - x[b2], kx) - kernels::kappa(x[a2] - x[b1], kx));
      const double qb = (kernels::kappa(y[a1] - y[b1], ky) - kernels::kappa(y[a1] - y[b2], ky)) +
                        (kernels::kappa(y[a2] - y[b2], ky) - kernels::kappa(y[a2] - y[b1], ky));
      acc += kb * qb;
    }
  }
  const auto kd = static_cast<double>(K);
  const double raw = acc / (4.0 * kd * kd);
  return make_result(raw, MeasureKind::chsic, static_cast<int>(x.size()), sel.alpha,
                     sel.mode, kx.bandwidth, ky.bandwidth);
}

}  // namespace udep::measures
