#include "oarlink/channel.hpp"

#include <cmath>

#include "oarlink/core.hpp"
#include "oarlink/kernels.hpp"

namespace oarlink {

NormalizeResult normalize_power(std::span<const double> x) {
    NormalizeResult out;
    out.symbols.assign(x.begin(), x.end());
    if (x.empty()) return out;
    const double power = kernels::sum_squares(x.data(), x.size());
    if (power == 0.0) return out;
    out.scale = std::sqrt(static_cast<double>(x.size()) / power);
    for (double& v : out.symbols) v *= out.scale;
    return out;
}

double noise_sigma(const ChannelConfig& cfg, size_t length) {
    if (std::isinf(cfg.snr_db)) return 0.0;
    double variance = std::pow(10.0, -cfg.snr_db / 10.0);
    if (cfg.noise_mode == NoiseMode::length_scaled && length > 0)
        variance *= static_cast<double>(kLengthScaleRef) / static_cast<double>(length);
    return std::sqrt(variance);
}

std::vector<double> awgn(std::span<const double> x, const ChannelConfig& cfg) {
    std::vector<double> y(x.size());
    const double sigma = noise_sigma(cfg, x.size());
    if (sigma == 0.0) {
        std::copy(x.begin(), x.end(), y.begin());
        return y;
    }
    kernels::add_awgn(x.data(), y.data(), x.size(), sigma, cfg.seed);
    return y;
}

OutageResult digital_outage(long long payload_bits, double snr_db, const DigitalLinkConfig& cfg,
                            uint64_t seed) {
    if (payload_bits < 0) throw ConfigError("digital_outage: payload must be >= 0");
    if (cfg.bits_per_symbol <= 0 || cfg.block_size_bits <= 0)
        throw ConfigError("digital_outage: bits_per_symbol and block size must be positive");
    OutageResult out;
    out.blocks_total =
        static_cast<int>((payload_bits + cfg.block_size_bits - 1) / cfg.block_size_bits);
    Rng rng(derive_seed(seed, 0xd161ULL));
    for (int k = 0; k < out.blocks_total; ++k) {
        const double jitter = cfg.per_block_snr_jitter_db > 0.0
                                  ? rng.gaussian() * cfg.per_block_snr_jitter_db
                                  : 0.0;
        const double effective_db = snr_db - cfg.capacity_penalty_db + jitter;
        const double capacity = std::log2(1.0 + std::pow(10.0, effective_db / 10.0));
        if (cfg.bits_per_symbol > capacity) ++out.blocks_failed;
    }
    out.outage = out.blocks_failed > 0;
    return out;
}

double outage_threshold_db(const DigitalLinkConfig& cfg) {
    return 10.0 * std::log10(std::pow(2.0, cfg.bits_per_symbol) - 1.0) + cfg.capacity_penalty_db;
}

long long baseline_payload_bits(double image_rate_kbps, const BaselineRates& rates) {
    if (image_rate_kbps < 0 || rates.audio_kbps < 0 || rates.text_bits < 0)
        throw ConfigError("baseline payload: rates must be >= 0");
    const double bits = image_rate_kbps * 1000.0 + rates.audio_kbps * 1000.0 + rates.text_bits;
    return static_cast<long long>(std::llround(bits));
}

}  // namespace oarlink
