#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oarlink/core.hpp"
#include "oarlink/worldgen.hpp"

using namespace oarlink;

TEST_CASE("same seed gives identical scenes") {
    const Vocabulary v = Vocabulary::builtin();
    SceneConfig cfg;
    cfg.seed = 42;
    CHECK(generate_scene(cfg, v) == generate_scene(cfg, v));
    cfg.seed = 43;
    CHECK_FALSE(generate_scene(cfg, v) == generate_scene(SceneConfig{.seed = 42}, v));
}

TEST_CASE("node count clamps to at least one") {
    const Vocabulary v = Vocabulary::builtin();
    SceneConfig cfg;
    cfg.mean_objects = 0.0;
    cfg.mean_visual_relations = 0.0;
    cfg.mean_audio_relations = 0.0;
    for (uint64_t s = 0; s < 20; ++s) {
        cfg.seed = s;
        const OarGraph g = generate_scene(cfg, v);
        CHECK(g.nodes.size() == 1);
        CHECK(g.edges.empty());
    }
}

TEST_CASE("every generated scene passes validation and the slot ceiling") {
    const Vocabulary v = Vocabulary::builtin();
    SceneConfig cfg;
    cfg.mean_objects = 25.0;  // stress the clamps
    cfg.mean_visual_relations = 40.0;
    for (uint64_t s = 0; s < 300; ++s) {
        cfg.seed = s;
        const OarGraph g = generate_scene(cfg, v);
        CAPTURE(s);
        CHECK(validate_graph(g, v).ok());
        CHECK(g.nodes.size() <= 30);
        CHECK(g.edges.size() <= 30);
    }
}

TEST_CASE("empirical relation mean lands in the clamped-Poisson interval") {
    const Vocabulary v = Vocabulary::builtin();
    SceneConfig cfg;
    double rel = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        cfg.seed = 10000 + i;
        rel += static_cast<double>(generate_scene(cfg, v).edges.size());
    }
    const double mean = rel / n;
    CHECK(mean >= 10.6);
    CHECK(mean <= 11.4);
}

TEST_CASE("full visibility and zero noise covers the scene at confidence 1") {
    const Vocabulary v = Vocabulary::builtin();
    SceneConfig sc;
    sc.seed = 7;
    const OarGraph scene = generate_scene(sc, v);
    ObservationConfig oc;
    oc.p_img_node = oc.p_img_edge = 1.0;
    oc.confidence_noise = 0.0;
    const ModalityView view = observe(scene, Modality::image, oc, v, 11);
    CHECK(view.evidence.size() == scene.nodes.size() + scene.edges.size());
    for (const auto& [ref, c] : view.evidence) CHECK(c == 1.0);
}

TEST_CASE("zero visibility gives an empty view") {
    const Vocabulary v = Vocabulary::builtin();
    SceneConfig sc;
    sc.seed = 8;
    const OarGraph scene = generate_scene(sc, v);
    ObservationConfig oc;
    oc.p_img_node = oc.p_img_edge = 0.0;
    CHECK(observe(scene, Modality::image, oc, v, 12).evidence.empty());
}

TEST_CASE("inclusion rate concentrates around the visibility probability") {
    const Vocabulary v = Vocabulary::builtin();
    ObservationConfig oc;
    oc.p_img_node = 0.5;
    oc.p_img_edge = 0.0;
    long included = 0, total = 0;
    SceneConfig sc;
    for (int i = 0; total < 10000; ++i) {
        sc.seed = 500 + i;
        const OarGraph scene = generate_scene(sc, v);
        const ModalityView view = observe(scene, Modality::image, oc, v, 700 + i);
        for (const auto& [ref, c] : view.evidence)
            if (!ref.is_edge) ++included;
        total += static_cast<long>(scene.nodes.size());
    }
    const double rate = static_cast<double>(included) / total;
    CHECK(rate >= 0.48);
    CHECK(rate <= 0.52);
}

TEST_CASE("audio observes only audio-capable categories and no edges") {
    const Vocabulary v = Vocabulary::builtin();
    const std::vector<bool> capable = v.audio_capable();
    ObservationConfig oc;
    oc.p_aud_event = 1.0;
    oc.confidence_noise = 0.0;
    SceneConfig sc;
    for (uint64_t s = 0; s < 50; ++s) {
        sc.seed = s;
        const OarGraph scene = generate_scene(sc, v);
        const ModalityView view = observe(scene, Modality::audio, oc, v, s);
        for (const auto& [ref, c] : view.evidence) {
            CHECK_FALSE(ref.is_edge);
            const ObjectNode* node = scene.find_slot(ref.a);
            REQUIRE(node != nullptr);
            CHECK(capable[node->category]);
        }
    }
}

TEST_CASE("noisy-or fusion analytics") {
    const EvidenceRef ref{false, 0, 0};
    ModalityView a{Modality::image, {{ref, 0.7}}};
    CHECK(fuse({a}).at(ref) == doctest::Approx(0.7));

    ModalityView b{Modality::text, {{ref, 0.5}}};
    ModalityView c{Modality::audio, {{ref, 0.5}}};
    ModalityView d{Modality::image, {{ref, 0.5}}};
    CHECK(fuse({b, c}).at(ref) == doctest::Approx(0.75));
    CHECK(fuse({b, c, d}).at(ref) == doctest::Approx(0.875));
    // adding a modality never hurts
    CHECK(fuse({b, c, d}).at(ref) > fuse({b, c}).at(ref));
    CHECK(fuse({b, c}).at(ref) > fuse({b}).at(ref));
}

TEST_CASE("fusion is commutative and references missing everywhere stay absent") {
    const EvidenceRef r1{false, 0, 0};
    const EvidenceRef r2{true, 0, 1};
    ModalityView a{Modality::image, {{r1, 0.3}, {r2, 0.8}}};
    ModalityView b{Modality::text, {{r1, 0.6}}};
    const auto f1 = fuse({a, b});
    const auto f2 = fuse({b, a});
    CHECK(f1 == f2);
    CHECK(f1.count(EvidenceRef{false, 5, 0}) == 0);
}

TEST_CASE("evidence graph keeps only edges with both endpoints observed") {
    OarGraph scene;
    scene.nodes.push_back({0, 1, std::nullopt, 1.0});
    scene.nodes.push_back({1, 2, std::nullopt, 1.0});
    scene.edges.push_back({0, 1, 3, 1.0});
    std::map<EvidenceRef, double> fused;
    fused[EvidenceRef{false, 0, 0}] = 0.9;
    fused[EvidenceRef{true, 0, 1}] = 0.8;  // object endpoint slot 1 unobserved
    const EvidenceGraph ev = evidence_graph(scene, fused);
    CHECK(ev.graph.nodes.size() == 1);
    CHECK(ev.graph.edges.empty());
    CHECK(ev.dropped_edges == 1);
    CHECK(ev.graph.nodes[0].confidence == doctest::Approx(0.9));
}
