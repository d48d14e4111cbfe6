#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "udep/errors.hpp"

namespace udep::pairs {

enum class SelectionMode { confounder, random, complete };

// K distinct unordered sample-index pairs, stored with f1[k] < f2[k].
// The measures are even in each pair, so the orientation is a pure
// normalization. `alpha` is recorded when the budget came from the
// floor(L*alpha/2) rule.
struct PairSelection {
  std::vector<int> f1;
  std::vector<int> f2;
  int L = 0;
  std::optional<double> alpha;
  SelectionMode mode = SelectionMode::complete;

  int size() const { return static_cast<int>(f1.size()); }
};

// Every unordered pair of {0, ..., L-1}, ordered by |z(l) - z(l')|
// ascending; exact ties fall back to lexicographic (min, max) order.
struct ConfounderOrder {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> abs_dz;  // aligned with `pairs`, non-decreasing
  int L = 0;
};

// L*(L-1)/2.
long long max_pairs(int L);

// Pair budget K = floor(L*alpha/2), clamped to [1, max_pairs(L)].
// Requires 1 <= alpha <= L-1.
int pair_budget(int L, double alpha);

ConfounderOrder confounder_order(std::span<const double> z);

// First K pairs of the order. Mode is `confounder`, or `complete` when
// K covers every pair.
PairSelection select_confounder(const ConfounderOrder& order, int K,
                                std::optional<double> alpha = std::nullopt);

// K distinct pairs drawn uniformly without replacement, deterministic
// given `seed`.
PairSelection select_random(int L, int K, std::uint64_t seed,
                            std::optional<double> alpha = std::nullopt);

}  // namespace udep::pairs
