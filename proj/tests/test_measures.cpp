#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "udep/kernels.hpp"
#include "udep/measures.hpp"
#include "udep/pairs.hpp"
#include "udep/synth.hpp"

using udep::kernels::KernelFamily;
using udep::kernels::KernelSpec;
using udep::pairs::PairSelection;

namespace {

const KernelSpec kUnit{KernelFamily::gaussian, 1.0};

KernelSpec data_spec(const std::vector<double>& samples) {
  return {KernelFamily::gaussian,
          udep::kernels::bandwidth(samples, static_cast<int>(samples.size()))};
}

PairSelection confounder_selection(const std::vector<double>& z, double alpha) {
  const int L = static_cast<int>(z.size());
  return udep::pairs::select_confounder(udep::pairs::confounder_order(z),
                                        udep::pairs::pair_budget(L, alpha), alpha);
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("hsic closed form for L = 2") {
  // Expanding trace(PKPQ) for 2x2 Grams gives (1 - kx(dx)) * (1 - ky(dy)).
  const std::vector<double> x{0.3, 1.7};
  const std::vector<double> y{-0.5, 0.75};
  const KernelSpec kx{KernelFamily::gaussian, 0.8};
  const KernelSpec ky{KernelFamily::gaussian, 1.3};
  const double expected = (1.0 - udep::kernels::kappa(x[0] - x[1], kx)) *
                          (1.0 - udep::kernels::kappa(y[0] - y[1], ky));
  const auto result = udep::measures::hsic(x, y, kx, ky);
  CHECK(result.raw == doctest::Approx(expected).epsilon(1e-14));
  CHECK(result.L == 2);
  CHECK_FALSE(result.alpha.has_value());
  CHECK_FALSE(result.mode.has_value());
}

TEST_CASE("hsic of a shifted copy equals hsic of the variable with itself") {
  udep::rng::Xoshiro256pp gen(101);
  const auto x = udep::test::dyadic_vector(gen, 24);
  auto y = x;
  for (auto& v : y) v += 2.5;  // dyadic: differences stay bit-identical
  const auto self = udep::measures::hsic(x, x, kUnit, kUnit);
  const auto shifted = udep::measures::hsic(x, y, kUnit, kUnit);
  CHECK(shifted.raw == self.raw);
}

TEST_CASE("hsic is symmetric in its arguments, exactly") {
  udep::rng::Xoshiro256pp gen(103);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = udep::test::normal_vector(gen, 17);
    const auto y = udep::test::normal_vector(gen, 17);
    const auto kx = data_spec(x);
    const auto ky = data_spec(y);
    CHECK(udep::measures::hsic(x, y, kx, ky).raw ==
          udep::measures::hsic(y, x, ky, kx).raw);
  }
}

TEST_CASE("hsic equals the literal centered trace") {
  // Materialize P = I - (1/L) 1 1^T and evaluate trace(PKPQ)/(L-1)^2 with
  // plain matrix products; the analytic centering must reproduce it.
  udep::rng::Xoshiro256pp gen(104);
  for (int trial = 0; trial < 5; ++trial) {
    const int L = 6 + static_cast<int>(gen.bounded(20));
    const auto x = udep::test::normal_vector(gen, L);
    const auto y = udep::test::normal_vector(gen, L);
    const auto kx = data_spec(x);
    const auto ky = data_spec(y);

    const auto gx = udep::kernels::gram(x, x, kx);
    const auto gy = udep::kernels::gram(y, y, ky);
    const Eigen::MatrixXd centering =
        Eigen::MatrixXd::Identity(L, L) -
        Eigen::MatrixXd::Constant(L, L, 1.0 / static_cast<double>(L));
    const double brute =
        (centering * gx.values * centering * gy.values).trace() /
        (static_cast<double>(L - 1) * static_cast<double>(L - 1));

    const auto result = udep::measures::hsic(x, y, kx, ky);
    CHECK(udep::test::rel_diff(result.raw, brute) <= 1e-12);
  }
}

TEST_CASE("hsic validation") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 2.0};
  CHECK_THROWS_AS(udep::measures::hsic(x, y, kUnit, kUnit), udep::ShapeError);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(udep::measures::hsic(one, one, kUnit, kUnit),
                  udep::InsufficientData);
}

TEST_CASE("hsic mean under independence shrinks with L" * doctest::timeout(120)) {
  // Monte-Carlo oracle: independent standard normals, L = 500; the
  // estimator bias is O(1/L).
  udep::rng::Xoshiro256pp gen(107);
  const int trials = 200;
  const int L = 500;
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto x = udep::test::normal_vector(gen, L);
    const auto y = udep::test::normal_vector(gen, L);
    total += udep::measures::hsic(x, y, data_spec(x), data_spec(y)).value;
  }
  CHECK(total / trials <= 0.01);
}

TEST_CASE("breve_gram single-pair entry and bounds") {
  const std::vector<double> x{0.0, 1.4, -2.0};
  PairSelection sel;
  sel.L = 3;
  sel.f1 = {0};
  sel.f2 = {2};
  sel.mode = udep::pairs::SelectionMode::confounder;

  const auto breve = udep::measures::breve_gram(x, sel, kUnit);
  REQUIRE(breve.values.rows() == 1);
  const double expected = 2.0 - 2.0 * udep::kernels::kappa(x[0] - x[2], kUnit);
  CHECK(breve.values(0, 0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("breve_gram is exactly symmetric with bounded diagonal") {
  udep::rng::Xoshiro256pp gen(109);
  const auto x = udep::test::normal_vector(gen, 16);
  const auto z = udep::test::normal_vector(gen, 16);
  const auto sel = confounder_selection(z, 4.0);
  const auto breve = udep::measures::breve_gram(x, sel, data_spec(x));

  CHECK(breve.values == breve.values.transpose().eval());
  for (int k = 0; k < sel.size(); ++k) {
    CHECK(breve.values(k, k) >= 0.0);
    CHECK(breve.values(k, k) <= 2.0);
  }
}

TEST_CASE("breve_gram is positive semidefinite up to tolerance") {
  udep::rng::Xoshiro256pp gen(113);
  const auto x = udep::test::normal_vector(gen, 20);
  const auto z = udep::test::normal_vector(gen, 20);
  const auto sel = confounder_selection(z, 6.0);
  const auto breve = udep::measures::breve_gram(x, sel, data_spec(x));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(breve.values);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8 * sel.size());
}

TEST_CASE("breve_gram validates the selection") {
  const std::vector<double> x{0.0, 1.0, 2.0};
  PairSelection sel;
  sel.L = 4;  // built for a different length
  sel.f1 = {0};
  sel.f2 = {3};
  CHECK_THROWS_AS(udep::measures::breve_gram(x, sel, kUnit), udep::ShapeError);

  PairSelection empty;
  empty.L = 3;
  CHECK_THROWS_AS(udep::measures::breve_gram(x, empty, kUnit),
                  udep::InsufficientData);
}

TEST_CASE("chsic for a single pair matches the L = 2 closed form") {
  const std::vector<double> x{0.3, 1.7};
  const std::vector<double> y{-0.5, 0.75};
  const KernelSpec kx{KernelFamily::gaussian, 0.8};
  const KernelSpec ky{KernelFamily::gaussian, 1.3};

  PairSelection sel;
  sel.L = 2;
  sel.f1 = {0};
  sel.f2 = {1};
  sel.alpha = 1.0;
  sel.mode = udep::pairs::SelectionMode::complete;

  const auto pruned = udep::measures::chsic(x, y, sel, kx, ky);
  const auto full = udep::measures::hsic(x, y, kx, ky);
  CHECK(pruned.raw == doctest::Approx(full.raw).epsilon(1e-14));
  CHECK(pruned.alpha == 1.0);
}

TEST_CASE("complete selection reduces chsic to hsic") {
  udep::rng::Xoshiro256pp gen(127);
  for (int trial = 0; trial < 8; ++trial) {
    const int L = (trial % 2 == 0) ? 10 : 30;
    const auto x = udep::test::normal_vector(gen, L);
    const auto y = udep::test::normal_vector(gen, L);
    const auto z = udep::test::normal_vector(gen, L);
    const auto kx = data_spec(x);
    const auto ky = data_spec(y);
    const auto sel = confounder_selection(z, static_cast<double>(L - 1));
    REQUIRE(sel.mode == udep::pairs::SelectionMode::complete);

    const auto pruned = udep::measures::chsic(x, y, sel, kx, ky);
    const auto full = udep::measures::hsic(x, y, kx, ky);
    CHECK(udep::test::rel_diff(pruned.raw, full.raw) <= 1e-10);
  }
}

TEST_CASE("chsic of a variable with itself is positive") {
  udep::rng::Xoshiro256pp gen(131);
  const auto x = udep::test::normal_vector(gen, 15);
  const auto z = udep::test::normal_vector(gen, 15);
  const auto sel = confounder_selection(z, 3.0);
  const auto result = udep::measures::chsic(x, x, sel, data_spec(x), data_spec(x));
  CHECK(result.raw > 0.0);
}

TEST_CASE("chsic is symmetric in its arguments, exactly") {
  udep::rng::Xoshiro256pp gen(137);
  const auto x = udep::test::normal_vector(gen, 18);
  const auto y = udep::test::normal_vector(gen, 18);
  const auto z = udep::test::normal_vector(gen, 18);
  const auto sel = confounder_selection(z, 5.0);
  const auto kx = data_spec(x);
  const auto ky = data_spec(y);
  CHECK(udep::measures::chsic(x, y, sel, kx, ky).raw ==
        udep::measures::chsic(y, x, sel, ky, kx).raw);
}

TEST_CASE("chsic agrees with the materialized breve-gram route") {
  udep::rng::Xoshiro256pp gen(139);
  const auto x = udep::test::normal_vector(gen, 14);
  const auto y = udep::test::normal_vector(gen, 14);
  const auto z = udep::test::normal_vector(gen, 14);
  const auto sel = confounder_selection(z, 4.0);
  const auto kx = data_spec(x);
  const auto ky = data_spec(y);

  const auto bx = udep::measures::breve_gram(x, sel, kx);
  const auto by = udep::measures::breve_gram(y, sel, ky);
  const double k = sel.size();
  const double via_breve = (bx.values.array() * by.values.array()).sum() / (4.0 * k * k);
  const double direct = udep::measures::chsic(x, y, sel, kx, ky).raw;
  CHECK(udep::test::rel_diff(via_breve, direct) <= 1e-13);
}

TEST_CASE("chsic_naive equals chsic over a randomized sweep") {
  udep::rng::Xoshiro256pp gen(149);
  for (int trial = 0; trial < 50; ++trial) {
    const int L = 8 + static_cast<int>(gen.bounded(9));  // K <= 64 via alpha cap
    auto x = udep::test::normal_vector(gen, L);
    const auto y = udep::test::normal_vector(gen, L);
    const auto z = udep::test::normal_vector(gen, L);
    if (trial % 4 == 0) x = y;  // include strongly dependent cases
    const double alpha = 1.0 + gen.uniform01() * 6.0;
    const auto sel = confounder_selection(z, alpha);
    REQUIRE(sel.size() <= 64);
    const auto kx = data_spec(x);
    const auto ky = data_spec(y);

    const auto fast = udep::measures::chsic(x, y, sel, kx, ky);
    const auto naive = udep::measures::chsic_naive(x, y, sel, kx, ky);
    CHECK(udep::test::rel_diff(fast.raw, naive.raw) <= 1e-12);
  }
}

TEST_CASE("hsic and chsic are nonnegative up to roundoff") {
  udep::rng::Xoshiro256pp gen(151);
  for (int trial = 0; trial < 100; ++trial) {
    const int L = 5 + static_cast<int>(gen.bounded(20));
    const auto x = udep::test::uniform_vector(gen, L, -3.0, 3.0);
    const auto y = udep::test::uniform_vector(gen, L, -3.0, 3.0);
    const auto z = udep::test::uniform_vector(gen, L, -3.0, 3.0);
    const auto kx = data_spec(x);
    const auto ky = data_spec(y);

    const auto marginal = udep::measures::hsic(x, y, kx, ky);
    CHECK(marginal.raw >= -1e-12);
    CHECK(marginal.value >= 0.0);

    const double alpha = 1.0 + gen.uniform01() * (L - 2);
    const auto sel = confounder_selection(z, alpha);
    const auto pruned = udep::measures::chsic(x, y, sel, kx, ky);
    CHECK(pruned.raw >= -1e-12);
    CHECK(pruned.value >= 0.0);
  }
}

TEST_CASE("chsic is unchanged under affine maps of the confounder") {
  udep::rng::Xoshiro256pp gen(157);
  const auto x = udep::test::normal_vector(gen, 22);
  const auto y = udep::test::normal_vector(gen, 22);
  const auto z = udep::test::normal_vector(gen, 22);
  const auto kx = data_spec(x);
  const auto ky = data_spec(y);

  const auto sel = confounder_selection(z, 4.0);
  const double base = udep::measures::chsic(x, y, sel, kx, ky).raw;
  for (auto [a, b] : {std::pair{2.0, 0.0}, {-1.5, 3.0}, {0.25, -11.0}}) {
    auto mapped = z;
    for (auto& v : mapped) v = a * v + b;
    const auto sel_mapped = confounder_selection(mapped, 4.0);
    CHECK(sel_mapped.f1 == sel.f1);
    CHECK(sel_mapped.f2 == sel.f2);
    CHECK(udep::measures::chsic(x, y, sel_mapped, kx, ky).raw == base);
  }
}

TEST_CASE("random pruning is selection-unbiased against the exact mixture" *
          doctest::timeout(120)) {
  // Averaging chsic over uniform selections must reproduce the closed-form
  // mixture of the diagonal and off-diagonal term means:
  //   E_sel[chsic] = avg_diag/(4K) + (1 - 1/K) avg_off/4,
  // which at K = Kmax collapses to hsic. Checks select_random uniformity
  // and the trace bookkeeping in one shot.
  const int L = 8;
  const int K = 10;
  const udep::synth::Dataset data =
      udep::synth::generate({udep::synth::Model::mplus, 10.0, L}, 991);
  const auto kx = data_spec(data.x);
  const auto ky = data_spec(data.y);
  const auto gx = udep::kernels::gram(data.x, data.x, kx);
  const auto gy = udep::kernels::gram(data.y, data.y, ky);

  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) all.emplace_back(i, j);
  }
  const auto k_max = static_cast<int>(all.size());
  const auto term = [&](int k, int kp) {
    const auto [a1, a2] = all[static_cast<std::size_t>(k)];
    const auto [b1, b2] = all[static_cast<std::size_t>(kp)];
    const double kb = gx.values(a1, b1) + gx.values(a2, b2) - gx.values(a1, b2) -
                      gx.values(a2, b1);
    const double qb = gy.values(a1, b1) + gy.values(a2, b2) - gy.values(a1, b2) -
                      gy.values(a2, b1);
    return kb * qb;
  };
  double diag = 0.0;
  double off = 0.0;
  for (int k = 0; k < k_max; ++k) {
    for (int kp = 0; kp < k_max; ++kp) (k == kp ? diag : off) += term(k, kp);
  }
  const double avg_diag = diag / k_max;
  const double avg_off = off / (static_cast<double>(k_max) * (k_max - 1));

  const double complete = avg_diag / (4.0 * k_max) + (1.0 - 1.0 / k_max) * avg_off / 4.0;
  CHECK(udep::test::rel_diff(complete,
                             udep::measures::hsic_raw(gx.values, gy.values)) <= 1e-12);

  const double predicted = avg_diag / (4.0 * K) + (1.0 - 1.0 / K) * avg_off / 4.0;
  const int seeds = 20000;
  double total = 0.0;
  double total_sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto sel = udep::pairs::select_random(L, K, static_cast<std::uint64_t>(s));
    const double v = udep::measures::chsic_raw(gx.values, gy.values, sel);
    total += v;
    total_sq += v * v;
  }
  const double mc_mean = total / seeds;
  const double mc_se = std::sqrt((total_sq / seeds - mc_mean * mc_mean) / seeds);
  CHECK(std::abs(mc_mean - predicted) <= 4.0 * mc_se);
}

TEST_CASE("joint permutations leave both measures invariant to roundoff") {
  udep::rng::Xoshiro256pp gen(163);
  const int L = 20;
  const auto x = udep::test::normal_vector(gen, L);
  const auto y = udep::test::normal_vector(gen, L);
  const auto z = udep::test::normal_vector(gen, L);
  const auto kx = data_spec(x);
  const auto ky = data_spec(y);

  std::vector<int> perm(L);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = L - 1; i > 0; --i) {
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[gen.bounded(static_cast<std::uint64_t>(i + 1))]);
  }
  std::vector<double> px(L), py(L), pz(L);
  for (int i = 0; i < L; ++i) {
    const auto j = static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]);
    px[j] = x[static_cast<std::size_t>(i)];
    py[j] = y[static_cast<std::size_t>(i)];
    pz[j] = z[static_cast<std::size_t>(i)];
  }

  const double h0 = udep::measures::hsic(x, y, kx, ky).raw;
  const double h1 = udep::measures::hsic(px, py, kx, ky).raw;
  CHECK(udep::test::rel_diff(h0, h1) <= 1e-12);

  const double c0 = udep::measures::chsic(x, y, confounder_selection(z, 4.0), kx, ky).raw;
  const double c1 =
      udep::measures::chsic(px, py, confounder_selection(pz, 4.0), kx, ky).raw;
  CHECK(udep::test::rel_diff(c0, c1) <= 1e-12);
}

}  // TEST_SUITE
