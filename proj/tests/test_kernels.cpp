#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <vector>

#include "oarlink/core.hpp"
#include "oarlink/kernels.hpp"

using namespace oarlink;

namespace {
std::vector<double> randv(size_t n, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.gaussian();
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}
}  // namespace

TEST_CASE("correlate_rows omp matches serial bitwise") {
    for (const auto [rows, filters, dim] :
         {std::tuple{1, 1, 1}, {3, 7, 5}, {30, 150, 32}, {64, 33, 17}}) {
        const auto r = randv(static_cast<size_t>(rows) * dim, 1);
        const auto f = randv(static_cast<size_t>(filters) * dim, 2);
        std::vector<double> out_s(static_cast<size_t>(rows) * filters);
        std::vector<double> out_p(out_s.size());
        kernels::correlate_rows_serial(r.data(), rows, f.data(), filters, dim, out_s.data());
        kernels::correlate_rows_omp(r.data(), rows, f.data(), filters, dim, out_p.data());
        CHECK(bitwise_equal(out_s, out_p));
    }
}

TEST_CASE("project_rows omp matches serial bitwise") {
    for (const auto [rows, out_dim, in_dim] : {std::tuple{2, 4, 8}, {30, 32, 256}, {17, 96, 768}}) {
        const auto r = randv(static_cast<size_t>(rows) * in_dim, 3);
        const auto p = randv(static_cast<size_t>(out_dim) * in_dim, 4);
        std::vector<double> out_s(static_cast<size_t>(rows) * out_dim);
        std::vector<double> out_p(out_s.size());
        kernels::project_rows_serial(r.data(), rows, in_dim, p.data(), out_dim, out_s.data());
        kernels::project_rows_omp(r.data(), rows, in_dim, p.data(), out_dim, out_p.data());
        CHECK(bitwise_equal(out_s, out_p));
    }
}

TEST_CASE("add_awgn omp matches serial bitwise and is seed-deterministic") {
    const size_t n = 12345;
    const auto x = randv(n, 5);
    std::vector<double> a(n), b(n), c(n);
    kernels::add_awgn_serial(x.data(), a.data(), n, 0.7, 99);
    kernels::add_awgn_omp(x.data(), b.data(), n, 0.7, 99);
    kernels::add_awgn_serial(x.data(), c.data(), n, 0.7, 100);
    CHECK(bitwise_equal(a, b));
    CHECK_FALSE(bitwise_equal(a, c));
}

TEST_CASE("dispatching entry points agree with the serial reference") {
    const int rows = 40, filters = 200, dim = 64;
    const auto r = randv(static_cast<size_t>(rows) * dim, 6);
    const auto f = randv(static_cast<size_t>(filters) * dim, 7);
    std::vector<double> want(static_cast<size_t>(rows) * filters), got(want.size());
    kernels::correlate_rows_serial(r.data(), rows, f.data(), filters, dim, want.data());
    kernels::correlate_rows(r.data(), rows, f.data(), filters, dim, got.data());
    CHECK(bitwise_equal(want, got));
}

TEST_CASE("sum_squares") {
    const std::vector<double> x = {1.0, -2.0, 3.0};
    CHECK(kernels::sum_squares(x.data(), x.size()) == doctest::Approx(14.0));
    CHECK(kernels::sum_squares(x.data(), 0) == 0.0);
}

TEST_CASE("counter gaussian moments") {
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = gaussian_at(123, static_cast<uint64_t>(i));
        sum += g;
        sq += g * g;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
}
