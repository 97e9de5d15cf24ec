#pragma once
// Dense row-major matrix of 64-bit floats. Vectors are n x 1 matrices.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hidam {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }
    double at(std::size_t r, std::size_t c) const {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }
    double* row_ptr(std::size_t r) { return data.data() + r * cols; }
    const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }

    std::size_t size() const { return data.size(); }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline void check_shape(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("shape mismatch: " + what);
}

// y = A * x  (A: m x n, x: length n, y: length m)
inline void matvec(const Matrix& a, const double* x, double* y) {
    for (std::size_t r = 0; r < a.rows; ++r) {
        const double* ar = a.row_ptr(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < a.cols; ++c) acc += ar[c] * x[c];
        y[r] = acc;
    }
}

// y += A^T * x  (A: m x n, x: length m, y: length n)
inline void matvec_t_add(const Matrix& a, const double* x, double* y) {
    for (std::size_t r = 0; r < a.rows; ++r) {
        const double* ar = a.row_ptr(r);
        const double xr = x[r];
        for (std::size_t c = 0; c < a.cols; ++c) y[c] += ar[c] * xr;
    }
}

// A += u * v^T  (u: length rows, v: length cols)
inline void outer_add(Matrix& a, const double* u, const double* v) {
    for (std::size_t r = 0; r < a.rows; ++r) {
        double* ar = a.row_ptr(r);
        const double ur = u[r];
        for (std::size_t c = 0; c < a.cols; ++c) ar[c] += ur * v[c];
    }
}

inline double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace hidam
