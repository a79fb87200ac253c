#pragma once

#include <vector>

namespace dlo::nn {

// Row-major dense matrix of doubles; the only tensor type the networks need.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    void resize(int r, int c) {
        rows = r;
        cols = c;
        data.assign(static_cast<size_t>(r) * c, 0.0);
    }

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

// Batch kernels with two interchangeable implementations: a plain serial
// reference (used in tests and selectable at runtime) and a fast path backed
// by BLAS GEMM/GEMV plus OpenMP elementwise loops. tools/bench_kernels
// compares the two.
namespace kernels {

enum class Backend { Reference, Fast };

void set_backend(Backend b);
Backend backend();

// Y[B,O] = X[B,I] * W[O,I]^T + bias
void dense_forward(const Mat& X, const Mat& W, const std::vector<double>& bias, Mat& Y);

// y[O] = W[O,I] * x[I] + bias  (single sample; thread-safe)
void dense_forward_single(const double* x, const Mat& W, const std::vector<double>& bias,
                          double* y);

// dX[B,I] = dY[B,O] * W[O,I]
void dense_backward_input(const Mat& dY, const Mat& W, Mat& dX);

// dW[O,I] += dY^T * X ; db[O] += sum_b dY[b,O]
void dense_param_grads(const Mat& X, const Mat& dY, Mat& dW, std::vector<double>& db);

void relu_forward(Mat& a);
// dA <- dA masked by a > 0 (a holds post-activations)
void relu_backward(const Mat& a, Mat& dA);
void tanh_forward(Mat& a);
// dA <- dA * (1 - a^2)
void tanh_backward(const Mat& a, Mat& dA);

} // namespace kernels

} // namespace dlo::nn
