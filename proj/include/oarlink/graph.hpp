#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oarlink/vocab.hpp"

namespace oarlink {

// Slot ceiling of the transmission frame.
constexpr int kMaxSlots = 30;

struct ObjectNode {
    int slot = 0;
    int category = 0;
    std::optional<int> attribute;
    double confidence = 1.0;

    bool operator==(const ObjectNode&) const = default;
};

struct RelationEdge {
    int subject_slot = 0;
    int object_slot = 0;
    int predicate = 0;
    double confidence = 1.0;

    bool operator==(const RelationEdge&) const = default;
};

struct OarGraph {
    std::vector<ObjectNode> nodes;
    std::vector<RelationEdge> edges;

    const ObjectNode* find_slot(int slot) const;
    bool operator==(const OarGraph&) const = default;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks every type invariant of the graph against the vocabulary; violations
// are reported as data, never thrown.
ValidationReport validate_graph(const OarGraph& g, const Vocabulary& v);

// Structural equality ignoring confidences: same (slot, category, attribute)
// node set and same (subject, object, predicate) edge set.
bool same_structure(const OarGraph& a, const OarGraph& b);

struct ParseError : std::runtime_error {
    size_t byte_offset;
    ParseError(const std::string& what, size_t offset)
        : std::runtime_error(what), byte_offset(offset) {}
};

// One-line JSON record: {"nodes":[...],"edges":[...]}. parse(serialize(g))
// is the identity for every well-formed graph.
std::string serialize_graph(const OarGraph& g);
OarGraph parse_graph(const std::string& text);  // throws ParseError

}  // namespace oarlink
