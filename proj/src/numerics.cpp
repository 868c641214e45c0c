#include "gestrec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gestrec {

namespace {

[[noreturn]] void throw_shape_error(const Mat& m, const Vec& v, const char* op) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "%s: dimension mismatch: matrix is %zux%zu, vector has length %zu",
                  op, m.rows, m.cols, v.size());
    throw std::invalid_argument(msg);
}

}  // namespace

Vec matvec(const Mat& m, const Vec& v) {
    if (v.size() != m.cols) throw_shape_error(m, v, "matvec");
    Vec out(m.rows, 0.0);
    matvec_acc(m, v, out);
    return out;
}

void matvec_acc(const Mat& m, const Vec& v, Vec& out) {
    if (v.size() != m.cols || out.size() != m.rows) throw_shape_error(m, v, "matvec_acc");
    const double* row = m.data.data();
    for (std::size_t r = 0; r < m.rows; ++r, row += m.cols) {
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * v[c];
        out[r] += acc;
    }
}

Vec matvec_transposed(const Mat& m, const Vec& v) {
    if (v.size() != m.rows) throw_shape_error(m, v, "matvec_transposed");
    Vec out(m.cols, 0.0);
    const double* row = m.data.data();
    for (std::size_t r = 0; r < m.rows; ++r, row += m.cols) {
        const double vr = v[r];
        for (std::size_t c = 0; c < m.cols; ++c) out[c] += row[c] * vr;
    }
    return out;
}

void add_outer(Mat& m, const Vec& a, const Vec& b) {
    if (a.size() != m.rows || b.size() != m.cols) throw_shape_error(m, a, "add_outer");
    double* row = m.data.data();
    for (std::size_t r = 0; r < m.rows; ++r, row += m.cols) {
        const double ar = a[r];
        for (std::size_t c = 0; c < m.cols; ++c) row[c] += ar * b[c];
    }
}

double sigmoid_scalar(double x) {
    x = std::clamp(x, -500.0, 500.0);
    return 1.0 / (1.0 + std::exp(-x));
}

Vec sigmoid(const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = sigmoid_scalar(v[i]);
    return out;
}

Vec tanh_elem(const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    return out;
}

Vec softmax(const Vec& v) {
    Vec out(v.size());
    const double m = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

}  // namespace gestrec
