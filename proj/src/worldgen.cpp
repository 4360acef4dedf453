#include "oarlink/worldgen.hpp"

#include <algorithm>
#include <cmath>

#include "oarlink/core.hpp"

namespace oarlink {

namespace {

// Zipf(s=1) sampler over ranks 0..k-1 via the cumulative weight table.
class ZipfSampler {
  public:
    explicit ZipfSampler(int k) : cum_(k) {
        double total = 0.0;
        for (int r = 0; r < k; ++r) {
            total += 1.0 / static_cast<double>(r + 1);
            cum_[r] = total;
        }
        for (double& c : cum_) c /= total;
    }

    int sample(Rng& rng) const {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        return static_cast<int>(std::min<size_t>(it - cum_.begin(), cum_.size() - 1));
    }

  private:
    std::vector<double> cum_;
};

int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

}  // namespace

OarGraph generate_scene(const SceneConfig& cfg, const Vocabulary& vocab) {
    Rng rng(derive_seed(cfg.seed, 0x5ce9eULL));

    const int n = clamp_int(rng.poisson(cfg.mean_objects), 1, kMaxSlots);
    const ZipfSampler entity_zipf(vocab.n_entities());
    const ZipfSampler predicate_zipf(vocab.n_predicates());

    OarGraph g;
    g.nodes.reserve(n);
    for (int i = 0; i < n; ++i) {
        ObjectNode node;
        node.slot = i;
        node.category = entity_zipf.sample(rng);
        node.confidence = 1.0;
        if (rng.bernoulli(cfg.attribute_probability)) {
            const auto& allowed = vocab.attr_compat[node.category];
            if (!allowed.empty()) node.attribute = allowed[rng.uniform_int(static_cast<int>(allowed.size()))];
        }
        g.nodes.push_back(node);
    }

    const int max_pairs = n * (n - 1);
    const int m = clamp_int(rng.poisson(cfg.mean_visual_relations + cfg.mean_audio_relations), 0,
                            std::min(kMaxSlots, max_pairs));

    // partial Fisher-Yates over all ordered pairs keeps the draw exact even
    // when m approaches the pair count
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(max_pairs);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pairs.emplace_back(i, j);
    for (int k = 0; k < m; ++k) {
        const int pick = k + rng.uniform_int(static_cast<int>(pairs.size()) - k);
        std::swap(pairs[k], pairs[pick]);
        RelationEdge e;
        e.subject_slot = pairs[k].first;
        e.object_slot = pairs[k].second;
        e.predicate = predicate_zipf.sample(rng);
        e.confidence = 1.0;
        g.edges.push_back(e);
    }
    return g;
}

const char* modality_name(Modality m) {
    switch (m) {
        case Modality::image: return "image";
        case Modality::text: return "text";
        case Modality::audio: return "audio";
    }
    return "?";
}

Modality modality_from_name(const std::string& name) {
    if (name == "image") return Modality::image;
    if (name == "text") return Modality::text;
    if (name == "audio") return Modality::audio;
    throw ConfigError("unknown modality '" + name + "'");
}

ModalityView observe(const OarGraph& scene, Modality m, const ObservationConfig& cfg,
                     const Vocabulary& vocab, uint64_t seed) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(m) + 0x0b5e2ULL));
    ModalityView view;
    view.modality = m;

    auto confidence = [&]() {
        const double c = 1.0 - std::abs(rng.gaussian() * cfg.confidence_noise);
        return std::clamp(c, 0.0, 1.0);
    };

    double p_node = 0.0;
    double p_edge = 0.0;
    switch (m) {
        case Modality::image:
            p_node = cfg.p_img_node;
            p_edge = cfg.p_img_edge;
            break;
        case Modality::text:
            p_node = cfg.p_txt_node;
            p_edge = cfg.p_txt_edge;
            break;
        case Modality::audio:
            p_node = cfg.p_aud_event;
            p_edge = 0.0;
            break;
    }

    const std::vector<bool> capable =
        m == Modality::audio ? vocab.audio_capable() : std::vector<bool>();
    for (const auto& node : scene.nodes) {
        if (m == Modality::audio && !capable[node.category]) continue;
        if (rng.bernoulli(p_node))
            view.evidence.push_back({EvidenceRef{false, node.slot, 0}, confidence()});
    }
    for (const auto& edge : scene.edges) {
        if (p_edge <= 0.0) continue;
        if (rng.bernoulli(p_edge))
            view.evidence.push_back(
                {EvidenceRef{true, edge.subject_slot, edge.object_slot}, confidence()});
    }
    return view;
}

std::map<EvidenceRef, double> fuse(const std::vector<ModalityView>& views) {
    std::map<EvidenceRef, double> miss;  // product of (1 - c_m)
    for (const auto& view : views) {
        for (const auto& [ref, c] : view.evidence) {
            auto [it, inserted] = miss.try_emplace(ref, 1.0);
            it->second *= 1.0 - c;
        }
    }
    std::map<EvidenceRef, double> fused;
    for (const auto& [ref, q] : miss) fused[ref] = 1.0 - q;
    return fused;
}

EvidenceGraph evidence_graph(const OarGraph& scene, const std::map<EvidenceRef, double>& fused) {
    EvidenceGraph out;
    for (const auto& node : scene.nodes) {
        const auto it = fused.find(EvidenceRef{false, node.slot, 0});
        if (it == fused.end()) continue;
        ObjectNode n = node;
        n.confidence = it->second;
        out.graph.nodes.push_back(n);
    }
    for (const auto& edge : scene.edges) {
        const auto it = fused.find(EvidenceRef{true, edge.subject_slot, edge.object_slot});
        if (it == fused.end()) continue;
        if (!out.graph.find_slot(edge.subject_slot) || !out.graph.find_slot(edge.object_slot)) {
            ++out.dropped_edges;
            continue;
        }
        RelationEdge e = edge;
        e.confidence = it->second;
        out.graph.edges.push_back(e);
    }
    return out;
}

}  // namespace oarlink
