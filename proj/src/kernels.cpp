#include "oarlink/kernels.hpp"

#include <omp.h>

#include "oarlink/core.hpp"

namespace oarlink::kernels {

namespace {
// Below this many multiply-adds the fork/join overhead dominates.
constexpr long kParallelThreshold = 1 << 16;

bool use_serial(long work) { return work < kParallelThreshold || omp_in_parallel(); }

inline double dot(const double* a, const double* b, int dim) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) acc += a[k] * b[k];
    return acc;
}
}  // namespace

void correlate_rows_serial(const double* rows, int n_rows, const double* filters, int n_filters,
                           int dim, double* out) {
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_filters; ++j)
            out[static_cast<size_t>(i) * n_filters + j] =
                dot(rows + static_cast<size_t>(i) * dim, filters + static_cast<size_t>(j) * dim, dim);
}

void correlate_rows_omp(const double* rows, int n_rows, const double* filters, int n_filters,
                        int dim, double* out) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_filters; ++j)
            out[static_cast<size_t>(i) * n_filters + j] =
                dot(rows + static_cast<size_t>(i) * dim, filters + static_cast<size_t>(j) * dim, dim);
}

void correlate_rows(const double* rows, int n_rows, const double* filters, int n_filters, int dim,
                    double* out) {
    const long work = static_cast<long>(n_rows) * n_filters * dim;
    if (use_serial(work))
        correlate_rows_serial(rows, n_rows, filters, n_filters, dim, out);
    else
        correlate_rows_omp(rows, n_rows, filters, n_filters, dim, out);
}

void project_rows_serial(const double* rows, int n_rows, int in_dim, const double* proj,
                         int out_dim, double* out) {
    for (int i = 0; i < n_rows; ++i)
        for (int r = 0; r < out_dim; ++r)
            out[static_cast<size_t>(i) * out_dim + r] =
                dot(rows + static_cast<size_t>(i) * in_dim, proj + static_cast<size_t>(r) * in_dim,
                    in_dim);
}

void project_rows_omp(const double* rows, int n_rows, int in_dim, const double* proj, int out_dim,
                      double* out) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_rows; ++i)
        for (int r = 0; r < out_dim; ++r)
            out[static_cast<size_t>(i) * out_dim + r] =
                dot(rows + static_cast<size_t>(i) * in_dim, proj + static_cast<size_t>(r) * in_dim,
                    in_dim);
}

void project_rows(const double* rows, int n_rows, int in_dim, const double* proj, int out_dim,
                  double* out) {
    const long work = static_cast<long>(n_rows) * in_dim * out_dim;
    if (use_serial(work))
        project_rows_serial(rows, n_rows, in_dim, proj, out_dim, out);
    else
        project_rows_omp(rows, n_rows, in_dim, proj, out_dim, out);
}

void add_awgn_serial(const double* x, double* y, size_t n, double sigma, uint64_t seed) {
    for (size_t i = 0; i < n; ++i) y[i] = x[i] + sigma * gaussian_at(seed, i);
}

void add_awgn_omp(const double* x, double* y, size_t n, double sigma, uint64_t seed) {
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < ln; ++i)
        y[i] = x[i] + sigma * gaussian_at(seed, static_cast<uint64_t>(i));
}

void add_awgn(const double* x, double* y, size_t n, double sigma, uint64_t seed) {
    // ~40 flops per sample in the generator
    if (use_serial(static_cast<long>(n) * 40))
        add_awgn_serial(x, y, n, sigma, seed);
    else
        add_awgn_omp(x, y, n, sigma, seed);
}

double sum_squares(const double* x, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

}  // namespace oarlink::kernels
