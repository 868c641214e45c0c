#pragma once

#include <cstddef>
#include <vector>

namespace gestrec {

using Vec = std::vector<double>;

// Dense row-major matrix. Everything in this project is small and dense;
// 64-bit floats throughout so gradient checking stays meaningful.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
};

// out = m * v. Throws std::invalid_argument on dimension mismatch.
Vec matvec(const Mat& m, const Vec& v);

// out += m * v, writing into a preallocated vector of length m.rows.
void matvec_acc(const Mat& m, const Vec& v, Vec& out);

// out = m^T * v (v has length m.rows). Used by backpropagation.
Vec matvec_transposed(const Mat& m, const Vec& v);

// m += a * b^T.
void add_outer(Mat& m, const Vec& a, const Vec& b);

// Elementwise logistic function. The argument is clamped to [-500, 500];
// output is always in (0, 1).
double sigmoid_scalar(double x);
Vec sigmoid(const Vec& v);

// Elementwise hyperbolic tangent, outputs in (-1, 1).
Vec tanh_elem(const Vec& v);

// Numerically stable softmax (max-subtraction). Output entries are
// nonnegative and sum to 1.
Vec softmax(const Vec& v);

}  // namespace gestrec
