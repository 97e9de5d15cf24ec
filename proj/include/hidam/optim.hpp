#pragma once
// Trainable parameters, Adam with decoupled weight decay, and a
// finite-difference gradient checker.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hidam/matrix.hpp"

namespace hidam {

struct Parameter {
    std::string name;
    Matrix value;
    Matrix grad;

    Parameter() = default;
    Parameter(std::string n, Matrix v)
        : name(std::move(n)), value(std::move(v)), grad(value.rows, value.cols) {}
};

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t step = 0;
    std::vector<Matrix> m;  // first moments, one per parameter
    std::vector<Matrix> v;  // second moments

    void reset(const std::vector<Parameter>& params);
};

// One Adam update over all parameters. Weight decay is decoupled:
// value -= lr * wd * value before the Adam delta.
void adam_step(std::vector<Parameter>& params, AdamState& state, double lr,
               double weight_decay);

// Loss closure: computes the loss; when with_grad is true it must also
// populate every parameter's grad (after zeroing).
using LossFn = std::function<double(bool with_grad)>;

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
};

// Central differences on a seeded coordinate subsample (at least
// min_coords per tensor, all coordinates for small tensors).
// rel err = |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
GradCheckResult grad_check(const LossFn& fn, std::vector<Parameter>& params,
                           double eps = 1e-5, std::size_t min_coords = 32,
                           std::uint64_t seed = 1);

}  // namespace hidam
