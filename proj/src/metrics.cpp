#include "hidam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hidam {

namespace {

void check_classes(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels,
                   std::size_t& n_pos, std::size_t& n_neg) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("metrics: score/label size mismatch");
    n_pos = 0;
    for (std::uint8_t l : labels) {
        if (l > 1) throw std::invalid_argument("metrics: label outside {0,1}");
        n_pos += l;
    }
    n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("metrics: both classes must be present");
}

}  // namespace

double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    std::size_t n_pos = 0, n_neg = 0;
    check_classes(scores, labels, n_pos, n_neg);
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum with average ranks over tied groups; exact for ties.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) pos_rank_sum += avg_rank;
        i = j;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double ks(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    std::size_t n_pos = 0, n_neg = 0;
    check_classes(scores, labels, n_pos, n_neg);
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double best = 0.0;
    std::size_t cum_pos = 0, cum_neg = 0, i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            cum_pos += labels[order[k]];
            cum_neg += 1 - labels[order[k]];
        }
        const double tpr = static_cast<double>(cum_pos) / static_cast<double>(n_pos);
        const double fpr = static_cast<double>(cum_neg) / static_cast<double>(n_neg);
        best = std::max(best, std::fabs(tpr - fpr));
        i = j;
    }
    return best;
}

}  // namespace hidam
