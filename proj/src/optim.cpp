#include "hidam/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hidam/rng.hpp"

namespace hidam {

void AdamState::reset(const std::vector<Parameter>& params) {
    step = 0;
    m.clear();
    v.clear();
    m.reserve(params.size());
    v.reserve(params.size());
    for (const Parameter& p : params) {
        m.emplace_back(p.value.rows, p.value.cols);
        v.emplace_back(p.value.rows, p.value.cols);
    }
}

void adam_step(std::vector<Parameter>& params, AdamState& state, double lr,
               double weight_decay) {
    if (state.m.size() != params.size()) state.reset(params);
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t p = 0; p < params.size(); ++p) {
        Matrix& val = params[p].value;
        const Matrix& g = params[p].grad;
        Matrix& m = state.m[p];
        Matrix& v = state.v[p];
        for (std::size_t i = 0; i < val.size(); ++i) {
            if (weight_decay != 0.0) val.data[i] -= lr * weight_decay * val.data[i];
            m.data[i] = state.beta1 * m.data[i] + (1.0 - state.beta1) * g.data[i];
            v.data[i] = state.beta2 * v.data[i] + (1.0 - state.beta2) * g.data[i] * g.data[i];
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            val.data[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

GradCheckResult grad_check(const LossFn& fn, std::vector<Parameter>& params,
                           double eps, std::size_t min_coords, std::uint64_t seed) {
    for (Parameter& p : params) p.grad.zero();
    const double base = fn(true);
    if (!std::isfinite(base)) throw std::runtime_error("grad_check: non-finite loss");

    std::vector<Matrix> analytic;
    analytic.reserve(params.size());
    for (const Parameter& p : params) analytic.push_back(p.grad);

    GradCheckResult res;
    for (std::size_t p = 0; p < params.size(); ++p) {
        Matrix& val = params[p].value;
        const std::size_t n = val.size();
        std::vector<std::size_t> coords;
        if (n <= min_coords) {
            coords.resize(n);
            for (std::size_t i = 0; i < n; ++i) coords[i] = i;
        } else {
            Rng rng(seed_mix(seed, p));
            coords.resize(n);
            for (std::size_t i = 0; i < n; ++i) coords[i] = i;
            rng.shuffle(coords);
            coords.resize(min_coords);
        }
        for (std::size_t i : coords) {
            const double saved = val.data[i];
            val.data[i] = saved + eps;
            const double up = fn(false);
            val.data[i] = saved - eps;
            const double down = fn(false);
            val.data[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw std::runtime_error("grad_check: non-finite loss under perturbation");
            const double numeric = (up - down) / (2.0 * eps);
            const double a = analytic[p].data[i];
            const double rel =
                std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), 1e-8});
            if (rel > res.max_rel_err) {
                res.max_rel_err = rel;
                res.worst_param = params[p].name;
                res.worst_index = i;
            }
        }
    }
    return res;
}

}  // namespace hidam
