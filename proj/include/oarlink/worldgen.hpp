#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oarlink/graph.hpp"

namespace oarlink {

struct SceneConfig {
    double mean_objects = 8.0;
    double mean_visual_relations = 10.4;
    double mean_audio_relations = 0.6;
    double attribute_probability = 0.6;
    uint64_t seed = 0;
};

// Synthesizes a valid scene: node count ~ Poisson(mean_objects) clamped to
// [1, 30], relation count ~ Poisson(visual + audio means) clamped to
// [0, min(30, n*(n-1))], categories Zipf(s=1) long-tailed. Deterministic in
// the seed.
OarGraph generate_scene(const SceneConfig& cfg, const Vocabulary& vocab);

enum class Modality { image, text, audio };

const char* modality_name(Modality m);
Modality modality_from_name(const std::string& name);  // throws ConfigError

// Reference into a scene: a node (by slot) or a directed edge (by slot pair).
struct EvidenceRef {
    bool is_edge = false;
    int a = 0;  // node slot, or subject slot
    int b = 0;  // object slot for edges
    auto operator<=>(const EvidenceRef&) const = default;
};

struct ModalityView {
    Modality modality = Modality::image;
    std::vector<std::pair<EvidenceRef, double>> evidence;
};

struct ObservationConfig {
    double p_img_node = 0.7;
    double p_img_edge = 0.6;
    double p_txt_node = 0.5;
    double p_txt_edge = 0.4;
    double p_aud_event = 0.8;
    double confidence_noise = 0.1;
};

// Each node/edge of the scene enters the view independently with the
// modality's visibility probability. Audio only reports nodes whose entity
// category is audio-capable per the vocabulary, and never edges. Included
// evidence carries confidence clamp(1 - |N(0, noise)|, 0, 1).
ModalityView observe(const OarGraph& scene, Modality m, const ObservationConfig& cfg,
                     const Vocabulary& vocab, uint64_t seed);

// Noisy-OR combination: 1 - prod_m (1 - c_m) per reference. Commutative,
// associative, monotone in added views.
std::map<EvidenceRef, double> fuse(const std::vector<ModalityView>& views);

// Rebuilds a valid graph from fused evidence: nodes take the fused confidence;
// edges are kept only when both endpoints survived. dropped_edges counts the
// casualties.
struct EvidenceGraph {
    OarGraph graph;
    int dropped_edges = 0;
};
EvidenceGraph evidence_graph(const OarGraph& scene, const std::map<EvidenceRef, double>& fused);

}  // namespace oarlink
