// Compares the serial reference kernels against their OpenMP variants and
// checks that both produce identical output. Sizes bracket the simulator's
// hot paths (30x32 blocks up to calibration-scale AWGN runs).

#include <omp.h>

#include <cstdio>
#include <cstring>
#include <vector>

#include "oarlink/core.hpp"
#include "oarlink/kernels.hpp"

using namespace oarlink;

namespace {

template <typename F>
double bench_ms(F&& f, int reps) {
    f();  // warm up
    const double t0 = omp_get_wtime();
    for (int r = 0; r < reps; ++r) f();
    return (omp_get_wtime() - t0) * 1000.0 / reps;
}

void fill(std::vector<double>& v, uint64_t seed) {
    Rng rng(seed);
    for (double& x : v) x = rng.gaussian();
}

bool equal(const std::vector<double>& a, const std::vector<double>& b) {
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %10s %10s %8s %6s\n", "kernel", "serial ms", "omp ms", "speedup", "match");

    struct Case {
        int rows, filters, dim;
    };
    for (const Case c : {Case{30, 150, 32}, Case{256, 512, 64}, Case{1024, 1024, 128}}) {
        std::vector<double> rows(static_cast<size_t>(c.rows) * c.dim);
        std::vector<double> filters(static_cast<size_t>(c.filters) * c.dim);
        fill(rows, 1);
        fill(filters, 2);
        std::vector<double> out_s(static_cast<size_t>(c.rows) * c.filters);
        std::vector<double> out_p(out_s.size());
        const int reps = c.rows <= 64 ? 2000 : 10;
        const double ts = bench_ms(
            [&] {
                kernels::correlate_rows_serial(rows.data(), c.rows, filters.data(), c.filters,
                                               c.dim, out_s.data());
            },
            reps);
        const double tp = bench_ms(
            [&] {
                kernels::correlate_rows_omp(rows.data(), c.rows, filters.data(), c.filters, c.dim,
                                            out_p.data());
            },
            reps);
        char name[64];
        std::snprintf(name, sizeof(name), "correlate %dx%dx%d", c.rows, c.filters, c.dim);
        std::printf("%-28s %10.3f %10.3f %8.2f %6s\n", name, ts, tp, ts / tp,
                    equal(out_s, out_p) ? "yes" : "NO");
    }

    for (const Case c : {Case{30, 32, 256}, Case{90, 32, 256}, Case{512, 96, 768}}) {
        std::vector<double> rows(static_cast<size_t>(c.rows) * c.dim);
        std::vector<double> proj(static_cast<size_t>(c.filters) * c.dim);
        fill(rows, 3);
        fill(proj, 4);
        std::vector<double> out_s(static_cast<size_t>(c.rows) * c.filters);
        std::vector<double> out_p(out_s.size());
        const int reps = c.rows <= 128 ? 2000 : 20;
        const double ts = bench_ms(
            [&] {
                kernels::project_rows_serial(rows.data(), c.rows, c.dim, proj.data(), c.filters,
                                             out_s.data());
            },
            reps);
        const double tp = bench_ms(
            [&] {
                kernels::project_rows_omp(rows.data(), c.rows, c.dim, proj.data(), c.filters,
                                          out_p.data());
            },
            reps);
        char name[64];
        std::snprintf(name, sizeof(name), "project %dx(%d->%d)", c.rows, c.dim, c.filters);
        std::printf("%-28s %10.3f %10.3f %8.2f %6s\n", name, ts, tp, ts / tp,
                    equal(out_s, out_p) ? "yes" : "NO");
    }

    for (const size_t n : {size_t{2880}, size_t{100000}, size_t{1000000}}) {
        std::vector<double> x(n), ys(n), yp(n);
        fill(x, 5);
        const int reps = n <= 10000 ? 500 : 10;
        const double ts =
            bench_ms([&] { kernels::add_awgn_serial(x.data(), ys.data(), n, 0.3, 42); }, reps);
        const double tp =
            bench_ms([&] { kernels::add_awgn_omp(x.data(), yp.data(), n, 0.3, 42); }, reps);
        char name[64];
        std::snprintf(name, sizeof(name), "awgn n=%zu", n);
        std::printf("%-28s %10.3f %10.3f %8.2f %6s\n", name, ts, tp, ts / tp,
                    equal(ys, yp) ? "yes" : "NO");
    }
    return 0;
}
