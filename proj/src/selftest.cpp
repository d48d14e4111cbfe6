#include <algorithm>
#include <cmath>
#include <vector>

#include "fmt_util.hpp"
#include "udep/feature_map.hpp"
#include "udep/harness.hpp"
#include "udep/kernels.hpp"
#include "udep/measures.hpp"
#include "udep/pairs.hpp"

namespace udep::harness {

namespace {

double finite_m_max_error(int m, double sigma_b) {
  const feature_map::SteeringConfig cfg{m, sigma_b};
  const kernels::KernelSpec spec{kernels::KernelFamily::gaussian, sigma_b};
  double worst = 0.0;
  constexpr int kGridPoints = 49;
  for (int i = 0; i < kGridPoints; ++i) {
    const double s = -3.0 * sigma_b + 6.0 * sigma_b * i / (kGridPoints - 1);
    worst = std::max(worst,
                     std::abs(feature_map::finite_m_kernel(s, 0.0, cfg) -
                              kernels::kappa(s, spec)));
  }
  return worst;
}

}  // namespace

SelfTestReport self_test() {
  SelfTestReport report;

  {
    // Discrete unit norm of the steering window across the (M, bandwidth)
    // range the oracle operates in.
    double worst = 0.0;
    for (int m : {256, 1024, 4096}) {
      for (double sigma : {0.5, 1.0, 2.0}) {
        worst = std::max(worst,
                         std::abs(feature_map::discrete_window_norm({m, sigma}) - 1.0));
      }
    }
    report.checks.push_back({"window discrete norm |sum - 1|, M in {256,1024,4096}",
                             worst, 1e-3, worst <= 1e-3, ""});
  }

  {
    // Darboux-sum convergence to the closed-form Gaussian kernel. The
    // coarse bandwidth keeps the M = 256 map visibly unconverged so the
    // decay across M is meaningful.
    const double sigma_b = 4.5;
    const double err_256 = finite_m_max_error(256, sigma_b);
    const double err_1024 = finite_m_max_error(1024, sigma_b);
    const double err_4096 = finite_m_max_error(4096, sigma_b);
    const std::string detail = "errors at M=256/1024/4096: " +
                               detail::format_g6(err_256) + " / " +
                               detail::format_g6(err_1024) + " / " +
                               detail::format_g6(err_4096);
    report.checks.push_back({"finite-M kernel max |error| at M=4096 (sigma_b=4.5)",
                             err_4096, 1e-2, err_4096 <= 1e-2, detail});
    const double worst_ratio = std::max(err_1024 / err_256, err_4096 / err_1024);
    report.checks.push_back({"finite-M kernel error non-increasing in M",
                             worst_ratio, 1.0, worst_ratio <= 1.0, detail});
  }

  {
    // Complete selection (alpha = L-1) must reduce the pruned measure to
    // the plain one.
    double worst = 0.0;
    int index = 0;
    for (int L : {10, 30, 50}) {
      const synth::Dataset data =
          synth::generate({synth::Model::mplus, 10.0, L}, 1000 + static_cast<std::uint64_t>(index++));
      const kernels::KernelSpec kx{kernels::KernelFamily::gaussian,
                                   kernels::bandwidth(data.x, L)};
      const kernels::KernelSpec ky{kernels::KernelFamily::gaussian,
                                   kernels::bandwidth(data.y, L)};
      const double alpha = static_cast<double>(L - 1);
      const auto order = pairs::confounder_order(data.z);
      const auto sel =
          pairs::select_confounder(order, pairs::pair_budget(L, alpha), alpha);
      const auto full = measures::hsic(data.x, data.y, kx, ky);
      const auto pruned = measures::chsic(data.x, data.y, sel, kx, ky);
      worst = std::max(worst, std::abs(pruned.raw - full.raw) / std::abs(full.raw));
    }
    report.checks.push_back({"complete-selection identity, rel |chsic - hsic|, L in {10,30,50}",
                             worst, 1e-10, worst <= 1e-10, ""});
  }

  return report;
}

}  // namespace udep::harness
