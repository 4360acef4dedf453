#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oarlink/core.hpp"
#include "oarlink/graph.hpp"
#include "oarlink/worldgen.hpp"

using namespace oarlink;

namespace {
bool has_violation(const ValidationReport& r, const std::string& needle) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const std::string& v) {
        return v.find(needle) != std::string::npos;
    });
}
}  // namespace

TEST_CASE("builtin vocabulary matches the default category sizes") {
    const Vocabulary v = Vocabulary::builtin();
    v.validate();
    CHECK(v.n_entities() == 150);
    CHECK(v.n_predicates() == 50);
    CHECK(v.n_attributes() == 95);
    CHECK(v.n_audio_events() == 22);
    CHECK(v.audio_capable().size() == 150);
    // every entity has a nonempty compatibility set in the builtin vocabulary
    for (const auto& allowed : v.attr_compat) CHECK_FALSE(allowed.empty());
}

TEST_CASE("vocabulary json round trip") {
    const Vocabulary v = Vocabulary::builtin();
    const Vocabulary w = Vocabulary::from_json(v.to_json());
    CHECK(w.entity_categories == v.entity_categories);
    CHECK(w.attr_compat == v.attr_compat);
    CHECK(w.audio_entity_map == v.audio_entity_map);
}

TEST_CASE("vocabulary validation failures") {
    Vocabulary v = Vocabulary::builtin();
    v.entity_categories[1] = v.entity_categories[0];
    CHECK_THROWS_AS(v.validate(), ConfigError);

    Vocabulary w = Vocabulary::builtin();
    w.attr_compat[0] = {999};
    CHECK_THROWS_AS(w.validate(), ConfigError);
}

TEST_CASE("empty graph validates") {
    const Vocabulary v = Vocabulary::builtin();
    CHECK(validate_graph(OarGraph{}, v).ok());
}

TEST_CASE("dangling edge endpoint is a violation") {
    const Vocabulary v = Vocabulary::builtin();
    OarGraph g;
    g.nodes.push_back({0, 3, std::nullopt, 1.0});
    g.edges.push_back({0, 7, 2, 1.0});
    const auto report = validate_graph(g, v);
    CHECK_FALSE(report.ok());
    CHECK(has_violation(report, "dangling edge endpoint"));
}

TEST_CASE("incompatible attribute is a violation") {
    const Vocabulary v = Vocabulary::builtin();
    int bad_attr = 0;
    while (v.attribute_allowed(0, bad_attr)) ++bad_attr;
    OarGraph g;
    g.nodes.push_back({0, 0, bad_attr, 1.0});
    const auto report = validate_graph(g, v);
    CHECK(has_violation(report, "incompatible attribute"));
}

TEST_CASE("duplicate slots, self loops, duplicate pairs, ranges") {
    const Vocabulary v = Vocabulary::builtin();
    OarGraph g;
    g.nodes.push_back({0, 0, std::nullopt, 1.0});
    g.nodes.push_back({0, 1, std::nullopt, 1.0});
    g.nodes.push_back({40, 2, std::nullopt, 1.5});
    g.nodes.push_back({1, 999, std::nullopt, 1.0});
    g.edges.push_back({0, 0, 0, 1.0});
    g.edges.push_back({0, 1, 0, 1.0});
    g.edges.push_back({0, 1, 3, 1.0});
    const auto report = validate_graph(g, v);
    CHECK(has_violation(report, "duplicate slot"));
    CHECK(has_violation(report, "slot out of range"));
    CHECK(has_violation(report, "confidence out of range"));
    CHECK(has_violation(report, "entity category out of range"));
    CHECK(has_violation(report, "self loop"));
    CHECK(has_violation(report, "duplicate ordered pair"));
}

TEST_CASE("empty graph serializes to the documented record") {
    CHECK(serialize_graph(OarGraph{}) == R"({"edges":[],"nodes":[]})");
    const OarGraph g = parse_graph(R"({"nodes":[],"edges":[]})");
    CHECK(g.nodes.empty());
    CHECK(g.edges.empty());
}

TEST_CASE("serialize/parse round trip over random scenes") {
    const Vocabulary v = Vocabulary::builtin();
    SceneConfig cfg;
    for (int i = 0; i < 1000; ++i) {
        cfg.seed = 5000 + i;
        const OarGraph g = generate_scene(cfg, v);
        const OarGraph back = parse_graph(serialize_graph(g));
        CHECK(back == g);
    }
}

TEST_CASE("parse rejects duplicate slots") {
    const std::string text =
        R"({"nodes":[{"slot":1,"category":0,"attribute":null,"confidence":1.0},)"
        R"({"slot":1,"category":2,"attribute":null,"confidence":1.0}],"edges":[]})";
    CHECK_THROWS_WITH_AS(parse_graph(text), doctest::Contains("duplicate slot"), ParseError);
}

TEST_CASE("parse reports a byte offset for malformed text") {
    try {
        parse_graph(R"({"nodes":[,],"edges":[]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset > 0);
    }
}

TEST_CASE("same_structure ignores confidences") {
    OarGraph a, b;
    a.nodes.push_back({0, 5, 2, 0.9});
    b.nodes.push_back({0, 5, 2, 0.1});
    CHECK(same_structure(a, b));
    b.nodes[0].attribute = std::nullopt;
    CHECK_FALSE(same_structure(a, b));
}
