#include "oarlink/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "oarlink/kernels.hpp"

namespace oarlink {

using nlohmann::json;

std::string Scheme::name() const {
    switch (type) {
        case SchemeType::semantic_adaptive: return "semantic_adaptive";
        case SchemeType::semantic_fixed_level:
            return "semantic_fixed_level(" + std::to_string(level) + ")";
        case SchemeType::uniform_analog: return "uniform_analog";
        case SchemeType::digital_baseline: return "digital_baseline(" + fmt_g6(rate_kbps) + ")";
    }
    return "?";
}

Scheme Scheme::parse(const std::string& text) {
    Scheme s;
    if (text == "semantic_adaptive") {
        s.type = SchemeType::semantic_adaptive;
        return s;
    }
    if (text == "uniform_analog") {
        s.type = SchemeType::uniform_analog;
        return s;
    }
    const auto paren = text.find('(');
    if (paren != std::string::npos && text.back() == ')') {
        const std::string head = text.substr(0, paren);
        const std::string arg = text.substr(paren + 1, text.size() - paren - 2);
        try {
            if (head == "semantic_fixed_level") {
                s.type = SchemeType::semantic_fixed_level;
                s.level = std::stoi(arg);
                if (s.level < 1 || s.level > 3)
                    throw ConfigError("semantic_fixed_level: level must be 1..3");
                return s;
            }
            if (head == "digital_baseline") {
                s.type = SchemeType::digital_baseline;
                s.rate_kbps = std::stod(arg);
                if (s.rate_kbps < 0) throw ConfigError("digital_baseline: rate must be >= 0");
                return s;
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("scheme '" + text + "': bad argument");
        }
    }
    throw ConfigError("unknown scheme '" + text + "'");
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig cfg;
    for (int s = 0; s <= 14; ++s) cfg.snr_db.push_back(s);
    cfg.schemes = {Scheme{SchemeType::semantic_adaptive, 0, 0.0}};
    cfg.modality_masks = {{Modality::image, Modality::text, Modality::audio}};
    return cfg;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (snr_db.empty()) throw ConfigError("config: snr_db list must not be empty");
    if (schemes.empty()) throw ConfigError("config: at least one scheme required");
    if (modality_masks.empty() || modality_masks.front().empty())
        throw ConfigError("config: modality mask must not be empty");
    if (theta < 0.0 || theta > 1.0) throw ConfigError("config: theta must be in [0,1]");
    stream_profile.validate();
    csi_policy.validate();
}

namespace {

double json_snr(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kSnrInfinite;
        throw ConfigError("config: snr entries must be numbers or \"inf\"");
    }
    return v.get<double>();
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const char* where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(std::string("config: unknown key '") + key + "' in " + where);
    }
}

std::vector<Modality> parse_modalities(const json& arr) {
    std::vector<Modality> mods;
    for (const auto& m : arr) mods.push_back(modality_from_name(m.get<std::string>()));
    return mods;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg = defaults();
    try {
        check_keys(j, {"vocab", "scene", "observation", "codebook_seed", "stream_profile",
                       "csi_policy", "snr_db", "noise_mode", "schemes", "modality_mask",
                       "modality_masks", "trials", "master_seed", "output", "theta", "digital",
                       "baseline_rates", "rate_ref_kbps", "corpus", "jsonl"},
                   "config");
        if (j.contains("vocab")) cfg.vocab = j["vocab"].get<std::string>();
        if (j.contains("scene")) {
            const json& s = j["scene"];
            check_keys(s, {"mean_objects", "mean_visual_relations", "mean_audio_relations",
                           "attribute_probability"},
                       "scene");
            if (s.contains("mean_objects")) cfg.scene.mean_objects = s["mean_objects"];
            if (s.contains("mean_visual_relations"))
                cfg.scene.mean_visual_relations = s["mean_visual_relations"];
            if (s.contains("mean_audio_relations"))
                cfg.scene.mean_audio_relations = s["mean_audio_relations"];
            if (s.contains("attribute_probability"))
                cfg.scene.attribute_probability = s["attribute_probability"];
        }
        if (j.contains("observation")) {
            const json& o = j["observation"];
            check_keys(o, {"p_img_node", "p_img_edge", "p_txt_node", "p_txt_edge", "p_aud_event",
                           "confidence_noise"},
                       "observation");
            if (o.contains("p_img_node")) cfg.observation.p_img_node = o["p_img_node"];
            if (o.contains("p_img_edge")) cfg.observation.p_img_edge = o["p_img_edge"];
            if (o.contains("p_txt_node")) cfg.observation.p_txt_node = o["p_txt_node"];
            if (o.contains("p_txt_edge")) cfg.observation.p_txt_edge = o["p_txt_edge"];
            if (o.contains("p_aud_event")) cfg.observation.p_aud_event = o["p_aud_event"];
            if (o.contains("confidence_noise"))
                cfg.observation.confidence_noise = o["confidence_noise"];
        }
        if (j.contains("codebook_seed")) cfg.codebook_seed = j["codebook_seed"].get<uint64_t>();
        if (j.contains("stream_profile")) {
            const json& p = j["stream_profile"];
            check_keys(p, {"u_obj", "u_rel", "u_attr", "r_obj", "r_rel", "r_attr"},
                       "stream_profile");
            if (p.contains("u_obj")) cfg.stream_profile.u_obj = p["u_obj"];
            if (p.contains("u_rel")) cfg.stream_profile.u_rel = p["u_rel"];
            if (p.contains("u_attr")) cfg.stream_profile.u_attr = p["u_attr"];
            if (p.contains("r_obj")) cfg.stream_profile.r_obj = p["r_obj"];
            if (p.contains("r_rel")) cfg.stream_profile.r_rel = p["r_rel"];
            if (p.contains("r_attr")) cfg.stream_profile.r_attr = p["r_attr"];
        }
        if (j.contains("csi_policy")) {
            const json& c = j["csi_policy"];
            check_keys(c, {"thresholds_db", "budgets"}, "csi_policy");
            cfg.csi_policy.thresholds_db.clear();
            cfg.csi_policy.budgets.clear();
            for (const auto& t : c.at("thresholds_db"))
                cfg.csi_policy.thresholds_db.push_back(t.get<double>());
            for (const auto& b : c.at("budgets")) cfg.csi_policy.budgets.push_back(b.get<int>());
        }
        if (j.contains("snr_db")) {
            cfg.snr_db.clear();
            for (const auto& v : j["snr_db"]) cfg.snr_db.push_back(json_snr(v));
        }
        if (j.contains("noise_mode")) {
            const std::string m = j["noise_mode"].get<std::string>();
            if (m == "per_symbol")
                cfg.noise_mode = NoiseMode::per_symbol;
            else if (m == "length_scaled")
                cfg.noise_mode = NoiseMode::length_scaled;
            else
                throw ConfigError("config: noise_mode must be per_symbol or length_scaled");
        }
        if (j.contains("schemes")) {
            cfg.schemes.clear();
            for (const auto& s : j["schemes"]) cfg.schemes.push_back(Scheme::parse(s));
        }
        if (j.contains("modality_mask"))
            cfg.modality_masks = {parse_modalities(j["modality_mask"])};
        if (j.contains("modality_masks")) {
            cfg.modality_masks.clear();
            for (const auto& m : j["modality_masks"])
                cfg.modality_masks.push_back(parse_modalities(m));
        }
        if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
        if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<uint64_t>();
        if (j.contains("output")) cfg.output = j["output"].get<std::string>();
        if (j.contains("theta")) cfg.theta = j["theta"].get<double>();
        if (j.contains("digital")) {
            const json& d = j["digital"];
            check_keys(d, {"bits_per_symbol", "capacity_penalty_db", "block_size_bits",
                           "per_block_snr_jitter_db"},
                       "digital");
            if (d.contains("bits_per_symbol")) cfg.digital.bits_per_symbol = d["bits_per_symbol"];
            if (d.contains("capacity_penalty_db"))
                cfg.digital.capacity_penalty_db = d["capacity_penalty_db"];
            if (d.contains("block_size_bits")) cfg.digital.block_size_bits = d["block_size_bits"];
            if (d.contains("per_block_snr_jitter_db"))
                cfg.digital.per_block_snr_jitter_db = d["per_block_snr_jitter_db"];
        }
        if (j.contains("baseline_rates")) {
            const json& b = j["baseline_rates"];
            check_keys(b, {"audio_kbps", "text_bits"}, "baseline_rates");
            if (b.contains("audio_kbps")) cfg.baseline_rates.audio_kbps = b["audio_kbps"];
            if (b.contains("text_bits")) cfg.baseline_rates.text_bits = b["text_bits"];
        }
        if (j.contains("rate_ref_kbps")) cfg.rate_ref_kbps = j["rate_ref_kbps"].get<double>();
        if (j.contains("corpus")) cfg.corpus = j["corpus"].get<std::string>();
        if (j.contains("jsonl")) cfg.jsonl = j["jsonl"].get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

RuntimeContext RuntimeContext::create(ExperimentConfig cfg) {
    cfg.validate();
    Vocabulary vocab = cfg.vocab == "builtin" ? Vocabulary::builtin() : Vocabulary::load(cfg.vocab);
    vocab.validate();
    Codebook cb = Codebook::build(vocab, cfg.codebook_seed);
    const int frame = cb.slots() * cb.channel_dim();
    const bool has_semantic = std::any_of(cfg.schemes.begin(), cfg.schemes.end(),
                                          [](const Scheme& s) {
                                              return s.type != SchemeType::digital_baseline;
                                          });
    if (has_semantic && (cfg.stream_profile.r_obj != frame || cfg.stream_profile.r_rel != frame ||
                         cfg.stream_profile.r_attr != frame))
        throw ConfigError("config: stream rates must equal slots*channel_dim (" +
                          std::to_string(frame) + ") for semantic schemes");
    RuntimeContext ctx{std::move(cfg), std::move(vocab), std::move(cb), {}};
    if (ctx.cfg.corpus) ctx.corpus = load_corpus(*ctx.cfg.corpus, ctx.vocabulary);
    return ctx;
}

std::string point_config_id(const Scheme& scheme, const std::vector<Modality>& mods,
                            double snr_db) {
    std::string code;
    for (Modality m : {Modality::image, Modality::text, Modality::audio})
        if (std::find(mods.begin(), mods.end(), m) != mods.end())
            code += modality_name(m)[0] == 'i' ? 'I' : (modality_name(m)[0] == 't' ? 'T' : 'A');
    return scheme.name() + "_" + code + "_snr" +
           (std::isinf(snr_db) ? std::string("inf") : fmt_g6(snr_db));
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

OarGraph degrade_graph(const OarGraph& scene, double drop_p, uint64_t seed) {
    Rng rng(derive_seed(seed, 0xde64ULL));
    OarGraph out;
    for (const auto& n : scene.nodes)
        if (!rng.bernoulli(drop_p)) out.nodes.push_back(n);
    for (const auto& e : scene.edges) {
        if (!out.find_slot(e.subject_slot) || !out.find_slot(e.object_slot)) continue;
        if (!rng.bernoulli(drop_p)) out.edges.push_back(e);
    }
    return out;
}

struct SemanticRun {
    OarGraph decoded;
    std::array<double, 3> d_align_stream{};
    double d_align = 0.0;
    StageTimes times;
};

SemanticRun run_semantic(const RuntimeContext& ctx, const TrialPoint& point,
                         const OarGraph& evidence, const TransmissionMask& mask, uint64_t seed) {
    const Codebook& cb = ctx.codebook;
    SemanticRun out;

    const auto t_enc = Clock::now();
    const EncodeResult enc = encode(evidence, cb);
    const Matrix sym_obj = compress(enc.latents.obj, cb);
    const Matrix sym_attr = compress(enc.latents.attr, cb);
    const Matrix sym_rel = compress(enc.latents.rel, cb);

    // transmitted streams concatenated in priority order: obj, rel, attr
    std::vector<double> tx;
    auto append = [&](const Matrix& m, bool on) {
        if (on) tx.insert(tx.end(), m.data.begin(), m.data.end());
    };
    append(sym_obj, mask.obj);
    append(sym_rel, mask.rel);
    append(sym_attr, mask.attr);
    const NormalizeResult norm = normalize_power(tx);
    out.times.encode_ms = ms_since(t_enc);

    const auto t_chan = Clock::now();
    ChannelConfig ch{point.snr_db, ctx.cfg.noise_mode, derive_seed(seed, 0xc4a2ULL)};
    std::vector<double> rx = awgn(norm.symbols, ch);
    out.times.channel_ms = ms_since(t_chan);

    const auto t_dec = Clock::now();
    // undo the negotiated power scale before matched filtering
    for (double& v : rx) v /= norm.scale;
    BlockSet blocks;
    blocks.obj = {Stream::obj, Matrix(cb.slots(), cb.channel_dim()), mask.obj};
    blocks.rel = {Stream::rel, Matrix(cb.slots(), cb.channel_dim()), mask.rel};
    blocks.attr = {Stream::attr, Matrix(cb.slots(), cb.channel_dim()), mask.attr};
    size_t offset = 0;
    auto take = [&](SymbolBlock& b) {
        if (!b.transmitted) return;  // stays zero-padded
        std::copy(rx.begin() + offset, rx.begin() + offset + b.symbols.data.size(),
                  b.symbols.data.begin());
        offset += b.symbols.data.size();
    };
    take(blocks.obj);
    take(blocks.rel);
    take(blocks.attr);
    out.decoded = decode_cascade(blocks, cb, ctx.vocabulary, ctx.cfg.theta);
    out.times.decode_ms = ms_since(t_dec);

    // alignment distortion over transmitted streams only
    const LatentBlocks& z = enc.latents;
    auto align = [&](const SymbolBlock& b, const Matrix& clean, int idx) {
        if (!b.transmitted) return;
        const Matrix z_hat = decompress(b.symbols, cb);
        out.d_align_stream[idx] = alignment_distortion(z_hat, clean);
        out.d_align += out.d_align_stream[idx];
    };
    align(blocks.obj, z.obj, 0);
    align(blocks.attr, z.attr, 1);
    align(blocks.rel, z.rel, 2);
    return out;
}

SemanticRun run_uniform(const RuntimeContext& ctx, const TrialPoint& point,
                        const OarGraph& evidence, int budget, uint64_t seed) {
    const Codebook& cb = ctx.codebook;
    if (budget % cb.slots() != 0)
        throw ConfigError("uniform_analog: budget must be a multiple of the slot count");
    const int sym_per_slot = budget / cb.slots();
    SemanticRun out;

    const auto t_enc = Clock::now();
    const EncodeResult enc = encode(evidence, cb);
    const Matrix sym = encode_uniform(evidence, cb, sym_per_slot);
    const NormalizeResult norm =
        normalize_power(std::span<const double>(sym.data.data(), sym.data.size()));
    out.times.encode_ms = ms_since(t_enc);

    const auto t_chan = Clock::now();
    ChannelConfig ch{point.snr_db, ctx.cfg.noise_mode, derive_seed(seed, 0xc4a2ULL)};
    std::vector<double> rx = awgn(norm.symbols, ch);
    out.times.channel_ms = ms_since(t_chan);

    const auto t_dec = Clock::now();
    for (double& v : rx) v /= norm.scale;
    Matrix rows(cb.slots(), sym_per_slot);
    std::copy(rx.begin(), rx.end(), rows.data.begin());
    out.decoded = decode_uniform(rows, cb, sym_per_slot, ctx.vocabulary, ctx.cfg.theta);
    out.times.decode_ms = ms_since(t_dec);

    // reconstruct the concatenated latent row and slice it per stream
    const Matrix& u = cb.uniform_projection(sym_per_slot);
    Matrix ut(u.cols, u.rows);
    for (int r = 0; r < u.rows; ++r)
        for (int c = 0; c < u.cols; ++c) ut.at(c, r) = u.at(r, c);
    Matrix z_hat_cat(cb.slots(), 3 * cb.latent_dim());
    kernels::project_rows(rows.data.data(), rows.rows, rows.cols, ut.data.data(), ut.rows,
                          z_hat_cat.data.data());
    const int d = cb.latent_dim();
    auto slice = [&](int offset) {
        Matrix m(cb.slots(), d);
        for (int r = 0; r < cb.slots(); ++r)
            std::copy(z_hat_cat.row(r) + offset, z_hat_cat.row(r) + offset + d, m.row(r));
        return m;
    };
    out.d_align_stream[0] = alignment_distortion(slice(0), enc.latents.obj);
    out.d_align_stream[1] = alignment_distortion(slice(d), enc.latents.attr);
    out.d_align_stream[2] = alignment_distortion(slice(2 * d), enc.latents.rel);
    out.d_align = out.d_align_stream[0] + out.d_align_stream[1] + out.d_align_stream[2];
    return out;
}

}  // namespace

TrialRecord run_trial(const RuntimeContext& ctx, const TrialPoint& point, int trial_index) {
    const uint64_t seed =
        derive_seed(ctx.cfg.master_seed, fnv1a64(point.config_id), static_cast<uint64_t>(trial_index));

    TrialRecord rec;
    rec.config_id = point.config_id;
    rec.seed = seed;
    rec.scheme = point.scheme;
    rec.snr_db = point.snr_db;

    if (!ctx.corpus.empty()) {
        rec.ground_truth = ctx.corpus[static_cast<size_t>(trial_index) % ctx.corpus.size()];
    } else {
        SceneConfig scene_cfg = ctx.cfg.scene;
        scene_cfg.seed = derive_seed(seed, 0x5ce2eULL);
        rec.ground_truth = generate_scene(scene_cfg, ctx.vocabulary);
    }

    if (point.scheme.type == SchemeType::digital_baseline) {
        const long long payload =
            baseline_payload_bits(point.scheme.rate_kbps, ctx.cfg.baseline_rates);
        const OutageResult outage =
            digital_outage(payload, point.snr_db, ctx.cfg.digital, derive_seed(seed, 0x07aULL));
        if (outage.outage) {
            rec.decoded = OarGraph{};
        } else {
            const double drop =
                std::clamp(1.0 - point.scheme.rate_kbps / ctx.cfg.rate_ref_kbps, 0.0, 0.9);
            rec.decoded = degrade_graph(rec.ground_truth, drop, derive_seed(seed, 0xd09dULL));
        }
        rec.metrics = evaluate_graphs(rec.ground_truth, rec.decoded);
        rec.metrics.failure = outage.outage;
        rec.level = 0;
        rec.symbols_sent =
            static_cast<long long>(std::llround(payload / ctx.cfg.digital.bits_per_symbol));
        rec.kbps = static_cast<double>(payload) / 1000.0;
        return rec;
    }

    // multimodal observation and fusion
    std::vector<ModalityView> views;
    views.reserve(point.modalities.size());
    for (Modality m : point.modalities)
        views.push_back(observe(rec.ground_truth, m, ctx.cfg.observation, ctx.vocabulary,
                                derive_seed(seed, 0x0b5eULL, static_cast<uint64_t>(m))));
    const EvidenceGraph evidence = evidence_graph(rec.ground_truth, fuse(views));

    const int budget = point.scheme.type == SchemeType::semantic_fixed_level
                           ? 0
                           : csi_to_budget(point.snr_db, ctx.cfg.csi_policy);

    SemanticRun run;
    if (point.scheme.type == SchemeType::uniform_analog) {
        run = run_uniform(ctx, point, evidence.graph, budget, seed);
        rec.level = mask_to_level(level_mask(budget / (ctx.codebook.channel_dim() *
                                                       ctx.codebook.slots()) ));
        rec.symbols_sent = budget;
        rec.mask = TransmissionMask{true, true, true};
    } else {
        MaskDecision decision;
        if (point.scheme.type == SchemeType::semantic_fixed_level) {
            decision.mask = level_mask(point.scheme.level);
        } else {
            decision = optimize_mask(ctx.cfg.stream_profile, budget);
        }
        run = run_semantic(ctx, point, evidence.graph, decision.mask, seed);
        rec.mask = decision.mask;
        rec.level = mask_to_level(decision.mask);
        rec.symbols_sent = (decision.mask.obj ? ctx.cfg.stream_profile.r_obj : 0) +
                           (decision.mask.rel ? ctx.cfg.stream_profile.r_rel : 0) +
                           (decision.mask.attr ? ctx.cfg.stream_profile.r_attr : 0);
    }
    rec.decoded = run.decoded;
    rec.kbps = static_cast<double>(rec.symbols_sent) / 1000.0;
    rec.metrics = evaluate_graphs(rec.ground_truth, rec.decoded);
    rec.metrics.d_align_stream = run.d_align_stream;
    rec.metrics.d_align = run.d_align;
    rec.metrics.failure = false;  // analog semantics never drop out
    rec.times = run.times;
    return rec;
}

namespace {

json graph_to_json(const OarGraph& g) { return json::parse(serialize_graph(g)); }

std::string csv_header() {
    return "config_id,scheme,snr_db,level,cbr,kbps,"
           "obj_r@5,obj_p@5,obj_r@10,obj_p@10,obj_r@20,obj_p@20,"
           "rel_r@10,rel_mr@10,rel_r@15,rel_mr@15,rel_r@20,rel_mr@20,rel_r@50,rel_mr@50,"
           "ged_raw,ged_norm,d_align,fail_rate,n_trials";
}

}  // namespace

SweepResult run_sweep(const RuntimeContext& ctx, const std::string& out_dir, int threads,
                      std::ostream* log) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const std::string csv_path = (fs::path(out_dir) / "summary.csv").string();
    std::ofstream csv_file(csv_path);
    if (!csv_file) throw IoError("cannot write " + csv_path);
    std::ofstream jsonl_file;
    if (ctx.cfg.jsonl) {
        jsonl_file.open((fs::path(out_dir) / "trials.jsonl").string());
        if (!jsonl_file) throw IoError("cannot write trials.jsonl under " + out_dir);
    }

    SweepResult result;
    for (const Scheme& scheme : ctx.cfg.schemes)
        for (const auto& mods : ctx.cfg.modality_masks)
            for (double snr : ctx.cfg.snr_db)
                result.points.push_back(
                    TrialPoint{snr, scheme, mods, point_config_id(scheme, mods, snr)});

    const int n_points = static_cast<int>(result.points.size());
    const int trials = ctx.cfg.trials;
    std::vector<TrialRecord> records(static_cast<size_t>(n_points) * trials);

    if (threads > 0) omp_set_num_threads(threads);
    const long total = static_cast<long>(records.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long flat = 0; flat < total; ++flat) {
        const int p = static_cast<int>(flat / trials);
        const int i = static_cast<int>(flat % trials);
        records[flat] = run_trial(ctx, result.points[p], i);
    }

    std::ostringstream csv;
    csv << csv_header() << "\n";
    double enc_ms = 0, chan_ms = 0, dec_ms = 0;
    long timed = 0;
    for (int p = 0; p < n_points; ++p) {
        const TrialPoint& point = result.points[p];
        std::vector<MetricReport> reports(trials);
        for (int i = 0; i < trials; ++i) reports[i] = records[static_cast<size_t>(p) * trials + i].metrics;
        const MetricSummary sum = aggregate(reports);
        result.summaries.push_back(sum);
        const TrialRecord& first = records[static_cast<size_t>(p) * trials];
        const double cbr = static_cast<double>(first.symbols_sent) / kCbrSourceDims;
        csv << point.config_id << ',' << point.scheme.name() << ','
            << (std::isinf(point.snr_db) ? std::string("inf") : fmt_g6(point.snr_db)) << ','
            << first.level << ',' << fmt_g6(cbr) << ',' << fmt_g6(first.kbps);
        for (size_t k = 0; k < kObjectKs.size(); ++k)
            csv << ',' << fmt_g6(sum.obj_recall_mean[k]) << ',' << fmt_g6(sum.obj_precision_mean[k]);
        for (size_t k = 0; k < kRelationKs.size(); ++k)
            csv << ',' << fmt_g6(sum.rel_recall_mean[k]) << ',' << fmt_g6(sum.rel_mean_recall_mean[k]);
        csv << ',' << fmt_g6(sum.ged_raw_mean) << ',' << fmt_g6(sum.ged_norm_mean) << ','
            << fmt_g6(sum.d_align_mean) << ',' << fmt_g6(sum.fail_rate) << ',' << sum.count
            << "\n";
        if (point.scheme.type != SchemeType::digital_baseline) {
            for (int i = 0; i < trials; ++i) {
                const auto& t = records[static_cast<size_t>(p) * trials + i].times;
                enc_ms += t.encode_ms;
                chan_ms += t.channel_ms;
                dec_ms += t.decode_ms;
                ++timed;
            }
        }
    }
    if (timed > 0) {
        result.mean_times.encode_ms = enc_ms / timed;
        result.mean_times.channel_ms = chan_ms / timed;
        result.mean_times.decode_ms = dec_ms / timed;
    }
    result.csv = csv.str();
    csv_file << result.csv;
    csv_file.close();
    if (!csv_file) throw IoError("short write on " + csv_path);

    if (ctx.cfg.jsonl) {
        for (const TrialRecord& rec : records) {
            json j;
            j["config_id"] = rec.config_id;
            j["seed"] = rec.seed;
            j["scheme"] = rec.scheme.name();
            j["snr_db"] = std::isinf(rec.snr_db) ? json("inf") : json(rec.snr_db);
            if (rec.mask)
                j["mask"] = {rec.mask->obj, rec.mask->rel, rec.mask->attr};
            else
                j["mask"] = nullptr;
            j["level"] = rec.level;
            j["symbols_sent"] = rec.symbols_sent;
            j["kbps"] = rec.kbps;
            j["ground_truth"] = graph_to_json(rec.ground_truth);
            j["decoded"] = graph_to_json(rec.decoded);
            j["obj_r@10"] = rec.metrics.obj_recall[1];
            j["rel_r@20"] = rec.metrics.rel_recall[2];
            j["ged_norm"] = rec.metrics.ged_normalized;
            j["d_align"] = rec.metrics.d_align;
            j["failure"] = rec.metrics.failure;
            jsonl_file << j.dump() << "\n";
        }
    }

    if (log) {
        *log << "sweep: " << n_points << " points x " << trials << " trials\n";
        *log << "timing per semantic trial (ms): encode " << fmt_g6(result.mean_times.encode_ms)
             << ", channel " << fmt_g6(result.mean_times.channel_ms) << ", decode "
             << fmt_g6(result.mean_times.decode_ms) << "\n";
        *log << "wrote " << csv_path << "\n";
    }
    return result;
}

std::vector<OarGraph> load_corpus(const std::string& path, const Vocabulary& vocab) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path);
    std::vector<OarGraph> graphs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            OarGraph g = parse_graph(line);
            const ValidationReport report = validate_graph(g, vocab);
            if (!report.ok())
                throw ConfigError("corpus line " + std::to_string(line_no) + ": " +
                                  report.violations.front());
            graphs.push_back(std::move(g));
        } catch (const ParseError& e) {
            throw ConfigError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return graphs;
}

}  // namespace oarlink
