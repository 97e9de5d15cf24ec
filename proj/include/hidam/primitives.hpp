#pragma once
// Differentiable primitives used by the model, each paired with an explicit
// backward rule. Backward functions take the upstream gradient and
// accumulate (+=) into the input gradients.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hidam/matrix.hpp"

namespace hidam {

// Entries drawn uniformly from [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed);

// y = W * x. Gradients: dW += dy * x^T, dx += W^T * dy.
void linear_forward(const Matrix& w, const double* x, double* y);
void linear_backward(const Matrix& w, const double* x, const double* dy,
                     Matrix& dw, double* dx);

double leaky_relu(double x, double slope);
double leaky_relu_grad(double x, double slope);

double relu(double x);
double relu_grad(double x);

// ELU with alpha = 1.
double elu(double x);
double elu_grad(double x);

double tanh_act(double x);
// Takes the forward output, not the input.
double tanh_grad_from_out(double y);

double sigmoid(double x);
// d sigmoid/dx expressed through the output y = sigmoid(x).
double sigmoid_grad_from_out(double y);

void map_forward(const double* x, double* y, std::size_t n, double (*f)(double));

// Index ranges [begin, end) into a flat score vector, one group per target.
struct Group {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

// Softmax within each group, max-subtracted for stability.
// Throws on an empty group.
void softmax_groups(const std::vector<double>& scores, const std::vector<Group>& groups,
                    std::vector<double>& weights);

// ds_i += w_i * (dw_i - sum_j w_j dw_j), per group.
void softmax_groups_backward(const std::vector<double>& weights, const std::vector<Group>& groups,
                             const std::vector<double>& dweights, std::vector<double>& dscores);

inline constexpr double kNormEps = 1e-12;

// y = x / max(||x||2, eps). Returns the unclamped norm, which the backward
// rule needs to pick the same branch.
double l2_normalize(const double* x, double* y, std::size_t n);
void l2_normalize_backward(const double* y, double norm, const double* dy, double* dx,
                           std::size_t n);

// y = a + b, dy propagates unchanged to both inputs.
void add_forward(const double* a, const double* b, double* y, std::size_t n);

// Concatenation is a copy; its backward is the slice-wise scatter done in place
// by the callers.
void concat_rows(const std::vector<const double*>& parts, std::size_t part_len, double* out);

}  // namespace hidam
