#pragma once

#include <cstddef>
#include <cstdint>

// Hot inner loops of the link simulator. Each kernel has a serial reference
// implementation and an OpenMP variant; both produce bitwise-identical output
// because every output element is computed by exactly one thread in the same
// order of operations. The unsuffixed entry points dispatch at runtime and are
// safe to call from inside an already-parallel region (they fall back to the
// serial path).

namespace oarlink::kernels {

// out[i*n_filters + j] = dot(rows + i*dim, filters + j*dim)
void correlate_rows_serial(const double* rows, int n_rows, const double* filters, int n_filters,
                           int dim, double* out);
void correlate_rows_omp(const double* rows, int n_rows, const double* filters, int n_filters,
                        int dim, double* out);
void correlate_rows(const double* rows, int n_rows, const double* filters, int n_filters, int dim,
                    double* out);

// out row i = proj (out_dim x in_dim) * rows row i
void project_rows_serial(const double* rows, int n_rows, int in_dim, const double* proj,
                         int out_dim, double* out);
void project_rows_omp(const double* rows, int n_rows, int in_dim, const double* proj, int out_dim,
                      double* out);
void project_rows(const double* rows, int n_rows, int in_dim, const double* proj, int out_dim,
                  double* out);

// y[i] = x[i] + sigma * n_i with n_i drawn from the counter-based normal
// generator at (seed, i); identical output for any thread count.
void add_awgn_serial(const double* x, double* y, size_t n, double sigma, uint64_t seed);
void add_awgn_omp(const double* x, double* y, size_t n, double sigma, uint64_t seed);
void add_awgn(const double* x, double* y, size_t n, double sigma, uint64_t seed);

// Serial on purpose: the result feeds the power-normalization scale and must
// not depend on a reduction order.
double sum_squares(const double* x, size_t n);

}  // namespace oarlink::kernels
