#include "dlo/tensor.hpp"

#include <atomic>
#include <cmath>

#include <cblas.h>

namespace dlo::nn::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::Fast};
} // namespace

void set_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }
Backend backend() { return g_backend.load(std::memory_order_relaxed); }

void dense_forward(const Mat& X, const Mat& W, const std::vector<double>& bias, Mat& Y) {
    const int B = X.rows, I = X.cols, O = W.rows;
    Y.resize(B, O);
    if (backend() == Backend::Fast) {
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, B, O, I, 1.0, X.data.data(), I,
                    W.data.data(), I, 0.0, Y.data.data(), O);
#pragma omp parallel for
        for (int b = 0; b < B; ++b) {
            double* y = Y.row(b);
            for (int o = 0; o < O; ++o) y[o] += bias[o];
        }
    } else {
        for (int b = 0; b < B; ++b) {
            const double* x = X.row(b);
            double* y = Y.row(b);
            for (int o = 0; o < O; ++o) {
                const double* w = W.row(o);
                double acc = bias[o];
                for (int i = 0; i < I; ++i) acc += x[i] * w[i];
                y[o] = acc;
            }
        }
    }
}

void dense_forward_single(const double* x, const Mat& W, const std::vector<double>& bias,
                          double* y) {
    const int I = W.cols, O = W.rows;
    if (backend() == Backend::Fast) {
        for (int o = 0; o < O; ++o) y[o] = bias[o];
        cblas_dgemv(CblasRowMajor, CblasNoTrans, O, I, 1.0, W.data.data(), I, x, 1, 1.0, y, 1);
    } else {
        for (int o = 0; o < O; ++o) {
            const double* w = W.row(o);
            double acc = bias[o];
            for (int i = 0; i < I; ++i) acc += x[i] * w[i];
            y[o] = acc;
        }
    }
}

void dense_backward_input(const Mat& dY, const Mat& W, Mat& dX) {
    const int B = dY.rows, O = dY.cols, I = W.cols;
    dX.resize(B, I);
    if (backend() == Backend::Fast) {
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, B, I, O, 1.0, dY.data.data(), O,
                    W.data.data(), I, 0.0, dX.data.data(), I);
    } else {
        for (int b = 0; b < B; ++b) {
            const double* g = dY.row(b);
            double* out = dX.row(b);
            for (int i = 0; i < I; ++i) out[i] = 0.0;
            for (int o = 0; o < O; ++o) {
                const double* w = W.row(o);
                const double gv = g[o];
                for (int i = 0; i < I; ++i) out[i] += gv * w[i];
            }
        }
    }
}

void dense_param_grads(const Mat& X, const Mat& dY, Mat& dW, std::vector<double>& db) {
    const int B = X.rows, I = X.cols, O = dY.cols;
    if (backend() == Backend::Fast) {
        cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, O, I, B, 1.0, dY.data.data(), O,
                    X.data.data(), I, 1.0, dW.data.data(), I);
#pragma omp parallel for
        for (int o = 0; o < O; ++o) {
            double acc = 0.0;
            for (int b = 0; b < B; ++b) acc += dY(b, o);
            db[o] += acc;
        }
    } else {
        for (int o = 0; o < O; ++o) {
            double* wrow = dW.row(o);
            double acc = 0.0;
            for (int b = 0; b < B; ++b) {
                const double gv = dY(b, o);
                const double* x = X.row(b);
                for (int i = 0; i < I; ++i) wrow[i] += gv * x[i];
                acc += gv;
            }
            db[o] += acc;
        }
    }
}

void relu_forward(Mat& a) {
    const size_t n = a.data.size();
    double* p = a.data.data();
    if (backend() == Backend::Fast) {
#pragma omp parallel for
        for (long i = 0; i < static_cast<long>(n); ++i)
            if (p[i] < 0.0) p[i] = 0.0;
    } else {
        for (size_t i = 0; i < n; ++i)
            if (p[i] < 0.0) p[i] = 0.0;
    }
}

void relu_backward(const Mat& a, Mat& dA) {
    const size_t n = a.data.size();
    const double* act = a.data.data();
    double* g = dA.data.data();
    if (backend() == Backend::Fast) {
#pragma omp parallel for
        for (long i = 0; i < static_cast<long>(n); ++i)
            if (act[i] <= 0.0) g[i] = 0.0;
    } else {
        for (size_t i = 0; i < n; ++i)
            if (act[i] <= 0.0) g[i] = 0.0;
    }
}

void tanh_forward(Mat& a) {
    const size_t n = a.data.size();
    double* p = a.data.data();
    if (backend() == Backend::Fast) {
#pragma omp parallel for
        for (long i = 0; i < static_cast<long>(n); ++i) p[i] = std::tanh(p[i]);
    } else {
        for (size_t i = 0; i < n; ++i) p[i] = std::tanh(p[i]);
    }
}

void tanh_backward(const Mat& a, Mat& dA) {
    const size_t n = a.data.size();
    const double* act = a.data.data();
    double* g = dA.data.data();
    if (backend() == Backend::Fast) {
#pragma omp parallel for
        for (long i = 0; i < static_cast<long>(n); ++i) g[i] *= (1.0 - act[i] * act[i]);
    } else {
        for (size_t i = 0; i < n; ++i) g[i] *= (1.0 - act[i] * act[i]);
    }
}

} // namespace dlo::nn::kernels
