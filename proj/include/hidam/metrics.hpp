#pragma once
// Ranking metrics used in credit scoring: AUC and the KS statistic.

#include <cstdint>
#include <vector>

namespace hidam {

// Probability that a random positive outranks a random negative, ties
// counted one half. Throws when either class is absent.
double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

// max over thresholds of |TPR - FPR|, single sorted sweep.
double ks(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

}  // namespace hidam
