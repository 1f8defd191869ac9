#include "physprop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "physprop/errors.hpp"
#include "physprop/rng.hpp"

namespace physprop {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const int n = static_cast<int>(scores.size());
  if (labels.size() != scores.size())
    throw std::invalid_argument("scores/labels size mismatch");
  long long n_pos = 0;
  for (const int l : labels) n_pos += l ? 1 : 0;
  const long long n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw SingleClassError("need at least one positive and one negative label");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return scores[a] < scores[b]; });

  // Midranks over tie runs, 1-based.
  std::vector<double> rank(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (int k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }

  double rank_sum_pos = 0;
  for (int k = 0; k < n; ++k)
    if (labels[k]) rank_sum_pos += rank[k];

  return (rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1)) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double roc_auc_bruteforce(std::span<const double> scores, std::span<const int> labels) {
  const int n = static_cast<int>(scores.size());
  long long n_pos = 0;
  for (const int l : labels) n_pos += l ? 1 : 0;
  const long long n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw SingleClassError("need at least one positive and one negative label");
  double wins = 0;
  for (int p = 0; p < n; ++p) {
    if (!labels[p]) continue;
    for (int q = 0; q < n; ++q) {
      if (labels[q]) continue;
      if (scores[p] > scores[q]) wins += 1.0;
      else if (scores[p] == scores[q]) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const int n = static_cast<int>(a.size());
  if (b.size() != a.size()) throw std::invalid_argument("series size mismatch");
  if (n < 2) throw InsufficientSamplesError("pearson needs at least 2 samples");
  double ma = 0, mb = 0;
  for (int i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) throw ZeroVarianceError("constant series has no correlation");
  return sab / std::sqrt(saa * sbb);
}

std::vector<RelativePair> build_relative_pairs(std::span<const int> group_ids,
                                               std::span<const double> true_values,
                                               int max_pairs, std::uint64_t seed) {
  if (group_ids.size() != true_values.size())
    throw std::invalid_argument("group/value size mismatch");
  const int n = static_cast<int>(group_ids.size());

  // All ordered pairs within a group, in deterministic (group, i, j) order.
  std::vector<RelativePair> all;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && group_ids[i] == group_ids[j])
        all.push_back({i, j, true_values[i] > true_values[j] ? 1 : 0});
  if (all.empty())
    throw InsufficientSamplesError("no viewpoint group has two or more samples");

  if (max_pairs >= static_cast<int>(all.size())) return all;

  // Seeded partial Fisher-Yates: the first max_pairs entries are the sample.
  Rng rng(mix_seed(seed, 0x9a125));
  for (int i = 0; i < max_pairs; ++i) {
    const auto j = i + static_cast<int>(rng.below(all.size() - i));
    std::swap(all[i], all[j]);
  }
  all.resize(max_pairs);
  return all;
}

}  // namespace physprop
