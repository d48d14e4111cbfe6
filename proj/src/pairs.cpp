#include "udep/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "udep/rng.hpp"

namespace udep::pairs {

namespace {

std::vector<std::pair<int, int>> all_pairs(int L) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(max_pairs(L)));
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) out.emplace_back(i, j);
  }
  return out;
}

PairSelection from_pairs(std::span<const std::pair<int, int>> chosen, int L,
                         SelectionMode mode, std::optional<double> alpha) {
  PairSelection sel;
  sel.L = L;
  sel.alpha = alpha;
  sel.mode = mode;
  sel.f1.reserve(chosen.size());
  sel.f2.reserve(chosen.size());
  for (const auto& [i, j] : chosen) {
    sel.f1.push_back(i);
    sel.f2.push_back(j);
  }
  return sel;
}

}  // namespace

long long max_pairs(int L) {
  return static_cast<long long>(L) * (L - 1) / 2;
}

int pair_budget(int L, double alpha) {
  if (L < 2) throw InvalidInput("pair_budget needs L >= 2");
  if (!std::isfinite(alpha) || alpha < 1.0 || alpha > static_cast<double>(L - 1)) {
    throw InvalidAlpha("alpha must lie in [1, L-1]");
  }
  const long long k_max = max_pairs(L);
  auto k = static_cast<long long>(std::floor(static_cast<double>(L) * alpha / 2.0));
  k = std::clamp(k, 1ll, k_max);
  return static_cast<int>(k);
}

ConfounderOrder confounder_order(std::span<const double> z) {
  const auto L = static_cast<int>(z.size());
  if (L < 2) throw InsufficientData("confounder_order needs at least 2 samples");
  for (double v : z) {
    if (!std::isfinite(v)) throw InvalidInput("confounder samples must be finite");
  }

  ConfounderOrder order;
  order.L = L;
  order.pairs = all_pairs(L);
  order.abs_dz.resize(order.pairs.size());
  for (std::size_t k = 0; k < order.pairs.size(); ++k) {
    const auto& [i, j] = order.pairs[k];
    order.abs_dz[k] = std::abs(z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
  }

  // Exact comparison on |dz|; the lexicographic tie rule plus stable key
  // makes the order fully deterministic.
  std::vector<std::size_t> idx(order.pairs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (order.abs_dz[a] != order.abs_dz[b]) return order.abs_dz[a] < order.abs_dz[b];
    return order.pairs[a] < order.pairs[b];
  });

  ConfounderOrder sorted;
  sorted.L = L;
  sorted.pairs.reserve(idx.size());
  sorted.abs_dz.reserve(idx.size());
  for (std::size_t k : idx) {
    sorted.pairs.push_back(order.pairs[k]);
    sorted.abs_dz.push_back(order.abs_dz[k]);
  }
  return sorted;
}

PairSelection select_confounder(const ConfounderOrder& order, int K,
                                std::optional<double> alpha) {
  const auto k_max = static_cast<long long>(order.pairs.size());
  if (K < 1 || K > k_max) throw InvalidBudget("pair budget outside [1, L*(L-1)/2]");
  const auto mode = (K == k_max) ? SelectionMode::complete : SelectionMode::confounder;
  return from_pairs({order.pairs.data(), static_cast<std::size_t>(K)}, order.L, mode, alpha);
}

PairSelection select_random(int L, int K, std::uint64_t seed,
                            std::optional<double> alpha) {
  if (L < 2) throw InvalidInput("select_random needs L >= 2");
  const long long k_max = max_pairs(L);
  if (K < 1 || K > k_max) throw InvalidBudget("pair budget outside [1, L*(L-1)/2]");

  // Partial Fisher-Yates over the full pair list: the first K slots end up
  // as a uniform without-replacement draw.
  auto pool = all_pairs(L);
  rng::Xoshiro256pp gen(seed);
  for (int k = 0; k < K; ++k) {
    const auto remaining = static_cast<std::uint64_t>(k_max - k);
    const auto pick = static_cast<std::size_t>(k) + static_cast<std::size_t>(gen.bounded(remaining));
    std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
  }
  return from_pairs({pool.data(), static_cast<std::size_t>(K)}, L, SelectionMode::random, alpha);
}

}  // namespace udep::pairs
