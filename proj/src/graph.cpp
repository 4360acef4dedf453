#include "oarlink/graph.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "oarlink/core.hpp"

namespace oarlink {

using nlohmann::json;

const ObjectNode* OarGraph::find_slot(int slot) const {
    for (const auto& n : nodes)
        if (n.slot == slot) return &n;
    return nullptr;
}

ValidationReport validate_graph(const OarGraph& g, const Vocabulary& v) {
    ValidationReport report;
    auto add = [&](const std::string& s) { report.violations.push_back(s); };

    std::set<int> slots;
    for (const auto& n : g.nodes) {
        if (n.slot < 0 || n.slot >= kMaxSlots)
            add("slot out of range: " + std::to_string(n.slot));
        if (!slots.insert(n.slot).second) add("duplicate slot: " + std::to_string(n.slot));
        if (n.category < 0 || n.category >= v.n_entities())
            add("entity category out of range: " + std::to_string(n.category));
        if (n.confidence < 0.0 || n.confidence > 1.0)
            add("node confidence out of range at slot " + std::to_string(n.slot));
        if (n.attribute) {
            if (*n.attribute < 0 || *n.attribute >= v.n_attributes())
                add("attribute category out of range: " + std::to_string(*n.attribute));
            else if (n.category >= 0 && n.category < v.n_entities() &&
                     !v.attribute_allowed(n.category, *n.attribute))
                add("incompatible attribute " + std::to_string(*n.attribute) + " on slot " +
                    std::to_string(n.slot));
        }
    }

    std::set<std::pair<int, int>> pairs;
    for (const auto& e : g.edges) {
        if (e.subject_slot == e.object_slot)
            add("self loop at slot " + std::to_string(e.subject_slot));
        if (!slots.count(e.subject_slot))
            add("dangling edge endpoint: " + std::to_string(e.subject_slot));
        if (!slots.count(e.object_slot))
            add("dangling edge endpoint: " + std::to_string(e.object_slot));
        if (e.predicate < 0 || e.predicate >= v.n_predicates())
            add("predicate out of range: " + std::to_string(e.predicate));
        if (e.confidence < 0.0 || e.confidence > 1.0)
            add("edge confidence out of range on pair (" + std::to_string(e.subject_slot) + "," +
                std::to_string(e.object_slot) + ")");
        if (!pairs.insert({e.subject_slot, e.object_slot}).second)
            add("duplicate ordered pair (" + std::to_string(e.subject_slot) + "," +
                std::to_string(e.object_slot) + ")");
    }
    return report;
}

bool same_structure(const OarGraph& a, const OarGraph& b) {
    using NodeKey = std::tuple<int, int, int>;  // slot, category, attribute(-1 = none)
    using EdgeKey = std::tuple<int, int, int>;
    std::multiset<NodeKey> na, nb;
    for (const auto& n : a.nodes) na.insert({n.slot, n.category, n.attribute.value_or(-1)});
    for (const auto& n : b.nodes) nb.insert({n.slot, n.category, n.attribute.value_or(-1)});
    if (na != nb) return false;
    std::multiset<EdgeKey> ea, eb;
    for (const auto& e : a.edges) ea.insert({e.subject_slot, e.object_slot, e.predicate});
    for (const auto& e : b.edges) eb.insert({e.subject_slot, e.object_slot, e.predicate});
    return ea == eb;
}

std::string serialize_graph(const OarGraph& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes) {
        json jn;
        jn["slot"] = n.slot;
        jn["category"] = n.category;
        if (n.attribute)
            jn["attribute"] = *n.attribute;
        else
            jn["attribute"] = nullptr;
        jn["confidence"] = n.confidence;
        nodes.push_back(std::move(jn));
    }
    json edges = json::array();
    for (const auto& e : g.edges) {
        json je;
        je["subject"] = e.subject_slot;
        je["object"] = e.object_slot;
        je["predicate"] = e.predicate;
        je["confidence"] = e.confidence;
        edges.push_back(std::move(je));
    }
    json j;
    j["nodes"] = std::move(nodes);
    j["edges"] = std::move(edges);
    return j.dump();
}

OarGraph parse_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    OarGraph g;
    try {
        if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
            throw ParseError("graph record must contain 'nodes' and 'edges'", 0);
        std::set<int> slots;
        for (const auto& jn : j.at("nodes")) {
            ObjectNode n;
            n.slot = jn.at("slot").get<int>();
            n.category = jn.at("category").get<int>();
            const auto& attr = jn.at("attribute");
            if (!attr.is_null()) n.attribute = attr.get<int>();
            n.confidence = jn.at("confidence").get<double>();
            if (!slots.insert(n.slot).second)
                throw ParseError("duplicate slot " + std::to_string(n.slot), 0);
            g.nodes.push_back(n);
        }
        for (const auto& je : j.at("edges")) {
            RelationEdge e;
            e.subject_slot = je.at("subject").get<int>();
            e.object_slot = je.at("object").get<int>();
            e.predicate = je.at("predicate").get<int>();
            e.confidence = je.at("confidence").get<double>();
            g.edges.push_back(e);
        }
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 0);
    }
    return g;
}

}  // namespace oarlink
