#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "physprop/scene.hpp"

namespace physprop {

/// Rank-sum ROC AUC with midrank tie handling: the probability that a random
/// positive outscores a random negative, ties counting one half. Throws
/// SingleClassError unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Brute-force pairwise AUC, O(n^2); the independent reference the rank-sum
/// implementation is checked against.
double roc_auc_bruteforce(std::span<const double> scores, std::span<const int> labels);

/// Centered Pearson correlation (two-pass). Throws ZeroVarianceError when
/// either series is constant, InsufficientSamplesError for length < 2.
double pearson(std::span<const double> a, std::span<const double> b);

/// One ordered comparison between two records of the same viewpoint group.
struct RelativePair {
  int first = 0;   // index into the sample arrays
  int second = 0;
  int label = 0;   // 1 iff values[first] > values[second]
};

/// Draw up to max_pairs ordered pairs, only within a viewpoint group,
/// deterministically per seed. Throws InsufficientSamplesError when no group
/// has at least two members.
std::vector<RelativePair> build_relative_pairs(std::span<const int> group_ids,
                                               std::span<const double> true_values,
                                               int max_pairs, std::uint64_t seed);

/// One metric over one split, with the raw pairs it was computed from.
struct EvalReport {
  Property property = Property::kElasticity;
  std::string split;
  std::string estimator;
  std::string task;    // "absolute" or "relative"
  std::string metric;  // "pearson", "pearson-log", or "roc-auc"
  double value = 0.0;
  int sample_count = 0;
  int failed_records = 0;
  // Absolute: (prediction, ground truth) per record. Relative: (score, label).
  std::vector<std::pair<double, double>> raw;
};

}  // namespace physprop
