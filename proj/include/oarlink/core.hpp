#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace oarlink {

// Thrown for malformed configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown for filesystem problems (CLI exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
    bool operator==(const Matrix&) const = default;
};

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t seed_mix(uint64_t state, uint64_t v) { return splitmix64(state ^ splitmix64(v)); }

// Stable 64-bit seed derivation: fold the parts into the master seed.
template <typename... Parts>
uint64_t derive_seed(uint64_t master, Parts... parts) {
    uint64_t s = splitmix64(master ^ 0x8000000000000001ULL);
    ((s = seed_mix(s, static_cast<uint64_t>(parts))), ...);
    return s;
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Counter-based standard normal draw: stateless in the index, so noise
// sequences are identical no matter how the loop over indices is split.
inline double gaussian_at(uint64_t seed, uint64_t index) {
    const uint64_t a = splitmix64(seed ^ splitmix64(2 * index));
    const uint64_t b = splitmix64(seed ^ splitmix64(2 * index + 1));
    const double u1 = ((a >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = (b >> 11) * 0x1.0p-53;        // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential splitmix64 generator. All sampling used by the simulator goes
// through this class so results do not depend on the C++ standard library's
// unspecified distribution algorithms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }        // [0,1)
    double uniform01_open() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }  // (0,1]

    double gaussian() {
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Knuth's product method; fine for the small lambdas used here.
    int poisson(double lambda) {
        const double limit = std::exp(-lambda);
        double p = 1.0;
        int k = 0;
        do {
            ++k;
            p *= uniform01_open();
        } while (p > limit);
        return k - 1;
    }

    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    uint64_t state_;
};

// Permutation-invariant sum: sort then Neumaier-accumulate, so aggregates do
// not depend on trial execution order.
double stable_sum(std::vector<double> values);

// Fixed float formatting for CSV output (6 significant digits).
std::string fmt_g6(double v);

}  // namespace oarlink
