#include "hidam/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hidam/rng.hpp"

namespace hidam {

Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("xavier_init: empty shape");
    Matrix m(rows, cols);
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Rng rng(seed);
    for (double& v : m.data) v = rng.uniform(-bound, bound);
    return m;
}

void linear_forward(const Matrix& w, const double* x, double* y) { matvec(w, x, y); }

void linear_backward(const Matrix& w, const double* x, const double* dy,
                     Matrix& dw, double* dx) {
    outer_add(dw, dy, x);
    if (dx) matvec_t_add(w, dy, dx);
}

double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }
double leaky_relu_grad(double x, double slope) { return x > 0.0 ? 1.0 : slope; }

double relu(double x) { return x > 0.0 ? x : 0.0; }
double relu_grad(double x) { return x > 0.0 ? 1.0 : 0.0; }

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }
double elu_grad(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

double tanh_act(double x) { return std::tanh(x); }
double tanh_grad_from_out(double y) { return 1.0 - y * y; }

double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}
double sigmoid_grad_from_out(double y) { return y * (1.0 - y); }

void map_forward(const double* x, double* y, std::size_t n, double (*f)(double)) {
    for (std::size_t i = 0; i < n; ++i) y[i] = f(x[i]);
}

void softmax_groups(const std::vector<double>& scores, const std::vector<Group>& groups,
                    std::vector<double>& weights) {
    weights.resize(scores.size());
    for (const Group& g : groups) {
        if (g.size() == 0) throw std::invalid_argument("softmax_groups: empty group");
        double mx = scores[g.begin];
        for (std::size_t i = g.begin + 1; i < g.end; ++i) mx = std::max(mx, scores[i]);
        double sum = 0.0;
        for (std::size_t i = g.begin; i < g.end; ++i) {
            weights[i] = std::exp(scores[i] - mx);
            sum += weights[i];
        }
        for (std::size_t i = g.begin; i < g.end; ++i) weights[i] /= sum;
    }
}

void softmax_groups_backward(const std::vector<double>& weights, const std::vector<Group>& groups,
                             const std::vector<double>& dweights, std::vector<double>& dscores) {
    dscores.resize(weights.size());
    for (const Group& g : groups) {
        double acc = 0.0;
        for (std::size_t i = g.begin; i < g.end; ++i) acc += weights[i] * dweights[i];
        for (std::size_t i = g.begin; i < g.end; ++i)
            dscores[i] += weights[i] * (dweights[i] - acc);
    }
}

double l2_normalize(const double* x, double* y, std::size_t n) {
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) sq += x[i] * x[i];
    const double norm = std::sqrt(sq);
    const double div = std::max(norm, kNormEps);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / div;
    return norm;
}

void l2_normalize_backward(const double* y, double norm, const double* dy, double* dx,
                           std::size_t n) {
    if (norm < kNormEps) {
        // Clamped branch: y = x / eps is linear in x.
        for (std::size_t i = 0; i < n; ++i) dx[i] += dy[i] / kNormEps;
        return;
    }
    // d(x/||x||) = (I - y y^T) / ||x|| applied to dy.
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += y[i] * dy[i];
    for (std::size_t i = 0; i < n; ++i) dx[i] += (dy[i] - y[i] * proj) / norm;
}

void add_forward(const double* a, const double* b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a[i] + b[i];
}

void concat_rows(const std::vector<const double*>& parts, std::size_t part_len, double* out) {
    for (std::size_t p = 0; p < parts.size(); ++p)
        std::copy(parts[p], parts[p] + part_len, out + p * part_len);
}

}  // namespace hidam
