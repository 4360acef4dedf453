#pragma once

#include <string>
#include <vector>

namespace oarlink {

// Category spaces for the O-A-R scene model. attr_compat lists the attribute
// categories each entity category may carry; audio_entity_map assigns each
// audio event category to the entity category it evidences.
struct Vocabulary {
    std::vector<std::string> entity_categories;
    std::vector<std::string> predicate_categories;
    std::vector<std::string> attribute_categories;
    std::vector<std::string> audio_event_categories;
    std::vector<std::vector<int>> attr_compat;  // indexed by entity category, sorted
    std::vector<int> audio_entity_map;          // indexed by audio event category

    int n_entities() const { return static_cast<int>(entity_categories.size()); }
    int n_predicates() const { return static_cast<int>(predicate_categories.size()); }
    int n_attributes() const { return static_cast<int>(attribute_categories.size()); }
    int n_audio_events() const { return static_cast<int>(audio_event_categories.size()); }

    bool attribute_allowed(int entity, int attribute) const;

    // entity categories that emit an audio signature
    std::vector<bool> audio_capable() const;

    // Throws ConfigError if any invariant is broken (duplicates, empty lists,
    // out-of-range indices).
    void validate() const;

    // Default vocabulary: 150 entities, 50 predicates, 95 attributes,
    // 22 audio events, formulaic compatibility tables.
    static Vocabulary builtin();

    static Vocabulary load(const std::string& path);
    void save(const std::string& path) const;

    std::string to_json() const;
    static Vocabulary from_json(const std::string& text);
};

}  // namespace oarlink
