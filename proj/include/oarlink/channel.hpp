#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace oarlink {

enum class NoiseMode { per_symbol, length_scaled };

// Reference sequence length for length_scaled noise: the full Level-3 frame.
constexpr int kLengthScaleRef = 2880;

constexpr double kSnrInfinite = std::numeric_limits<double>::infinity();

struct ChannelConfig {
    double snr_db = 10.0;
    NoiseMode noise_mode = NoiseMode::per_symbol;
    uint64_t seed = 0;
};

struct NormalizeResult {
    std::vector<double> symbols;
    double scale = 1.0;  // multiplier that was applied to the input
};

// Scales the sequence to unit mean power: y = x * sqrt(L / sum x^2). All-zero
// input is returned unchanged (scale 1); callers pass transmitted streams
// only, so masked-off padding never eats power.
NormalizeResult normalize_power(std::span<const double> x);

// Noise standard deviation implied by the config for a sequence of length L.
double noise_sigma(const ChannelConfig& cfg, size_t length);

// y = x + n with n iid N(0, sigma^2); sigma^2 = 10^(-snr/10) per symbol, or
// scaled by (L_ref / L) in length_scaled mode. Deterministic in the seed.
std::vector<double> awgn(std::span<const double> x, const ChannelConfig& cfg);

struct DigitalLinkConfig {
    double bits_per_symbol = 2.0;      // 16-QAM x rate-1/2 coding
    double capacity_penalty_db = 1.5;  // implementation gap to capacity
    int block_size_bits = 8192;
    double per_block_snr_jitter_db = 0.0;
};

struct OutageResult {
    bool outage = false;
    int blocks_failed = 0;
    int blocks_total = 0;
};

// Shannon-capacity transport-block test: block k fails iff bits_per_symbol
// exceeds log2(1 + 10^((snr - penalty + jitter_k)/10)); outage if any block
// fails. Deterministic when jitter is zero.
OutageResult digital_outage(long long payload_bits, double snr_db, const DigitalLinkConfig& cfg,
                            uint64_t seed);

// SNR below which a zero-jitter link is always in outage (and above which it
// never is): 10*log10(2^bits - 1) + penalty.
double outage_threshold_db(const DigitalLinkConfig& cfg);

struct BaselineRates {
    double audio_kbps = 6.0;
    int text_bits = 512;
};

// Rate model for the digital baselines at a nominal 1 s per sample: image
// kbps plus fixed audio and text budgets.
long long baseline_payload_bits(double image_rate_kbps, const BaselineRates& rates = {});

}  // namespace oarlink
