#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oarlink/channel.hpp"
#include "oarlink/codebook.hpp"
#include "oarlink/codec.hpp"
#include "oarlink/metrics.hpp"
#include "oarlink/scheduler.hpp"
#include "oarlink/worldgen.hpp"

namespace oarlink {

enum class SchemeType { semantic_adaptive, semantic_fixed_level, uniform_analog, digital_baseline };

struct Scheme {
    SchemeType type = SchemeType::semantic_adaptive;
    int level = 0;           // semantic_fixed_level
    double rate_kbps = 0.0;  // digital_baseline image rate

    std::string name() const;
    static Scheme parse(const std::string& text);  // throws ConfigError
    bool is_semantic() const {
        return type == SchemeType::semantic_adaptive || type == SchemeType::semantic_fixed_level;
    }
};

struct ExperimentConfig {
    std::string vocab = "builtin";  // or a vocabulary file path
    SceneConfig scene;
    ObservationConfig observation;
    uint64_t codebook_seed = 1;
    StreamProfile stream_profile;
    CsiPolicy csi_policy = default_csi_policy();
    std::vector<double> snr_db;  // default 0..14 step 1
    NoiseMode noise_mode = NoiseMode::per_symbol;
    std::vector<Scheme> schemes;
    std::vector<std::vector<Modality>> modality_masks;  // outer sweep, default one full mask
    int trials = 200;
    uint64_t master_seed = 1;
    std::string output = "out";
    double theta = 0.5;
    DigitalLinkConfig digital;
    BaselineRates baseline_rates;
    double rate_ref_kbps = 40.0;  // digital success-path degradation reference
    std::optional<std::string> corpus;
    bool jsonl = false;

    void validate() const;  // throws ConfigError
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig defaults();
};

// One (scheme, modality mask, snr) cell of the sweep.
struct TrialPoint {
    double snr_db = 0.0;
    Scheme scheme;
    std::vector<Modality> modalities;
    std::string config_id;
};

struct StageTimes {
    double encode_ms = 0.0;
    double channel_ms = 0.0;
    double decode_ms = 0.0;
};

struct TrialRecord {
    std::string config_id;
    uint64_t seed = 0;
    Scheme scheme;
    double snr_db = 0.0;
    std::optional<TransmissionMask> mask;  // absent for digital baselines
    int level = 0;                         // 0 = none/nonstandard
    long long symbols_sent = 0;
    double kbps = 0.0;
    OarGraph ground_truth;
    OarGraph decoded;
    MetricReport metrics;
    StageTimes times;
};

// Immutable shared state for a sweep; safe to use from many threads.
struct RuntimeContext {
    ExperimentConfig cfg;
    Vocabulary vocabulary;
    Codebook codebook;
    std::vector<OarGraph> corpus;

    static RuntimeContext create(ExperimentConfig cfg);
};

std::string point_config_id(const Scheme& scheme, const std::vector<Modality>& mods,
                            double snr_db);

// Full pipeline for one seeded trial; deterministic in (context, point, index).
TrialRecord run_trial(const RuntimeContext& ctx, const TrialPoint& point, int trial_index);

struct SweepResult {
    std::string csv;                   // summary table, one row per point
    std::vector<TrialPoint> points;
    std::vector<MetricSummary> summaries;  // parallel to points
    StageTimes mean_times;             // over semantic trials
};

// Runs the Cartesian sweep, writes <out>/summary.csv (and trials.jsonl when
// requested) and returns the summary. threads = 0 keeps the OpenMP default.
SweepResult run_sweep(const RuntimeContext& ctx, const std::string& out_dir, int threads = 0,
                      std::ostream* log = nullptr);

// JSONL corpus loading; aborts on the first invalid line, naming it.
std::vector<OarGraph> load_corpus(const std::string& path, const Vocabulary& vocab);

constexpr long long kCbrSourceDims = 3LL * 256 * 256;

}  // namespace oarlink
