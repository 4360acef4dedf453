#include "oarlink/vocab.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oarlink/core.hpp"

namespace oarlink {

using nlohmann::json;

bool Vocabulary::attribute_allowed(int entity, int attribute) const {
    if (entity < 0 || entity >= n_entities()) return false;
    const auto& allowed = attr_compat[entity];
    return std::binary_search(allowed.begin(), allowed.end(), attribute);
}

std::vector<bool> Vocabulary::audio_capable() const {
    std::vector<bool> capable(entity_categories.size(), false);
    for (int e : audio_entity_map)
        if (e >= 0 && e < n_entities()) capable[e] = true;
    return capable;
}

namespace {
void check_names(const std::vector<std::string>& names, const char* what) {
    if (names.empty()) throw ConfigError(std::string("vocabulary: empty ") + what + " list");
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second)
            throw ConfigError(std::string("vocabulary: duplicate ") + what + " name '" + n + "'");
}
}  // namespace

void Vocabulary::validate() const {
    check_names(entity_categories, "entity");
    check_names(predicate_categories, "predicate");
    check_names(attribute_categories, "attribute");
    check_names(audio_event_categories, "audio event");
    if (attr_compat.size() != entity_categories.size())
        throw ConfigError("vocabulary: attr_compat must have one entry per entity category");
    for (size_t e = 0; e < attr_compat.size(); ++e) {
        for (int a : attr_compat[e])
            if (a < 0 || a >= n_attributes())
                throw ConfigError("vocabulary: attr_compat[" + std::to_string(e) +
                                  "] references invalid attribute " + std::to_string(a));
        if (!std::is_sorted(attr_compat[e].begin(), attr_compat[e].end()))
            throw ConfigError("vocabulary: attr_compat[" + std::to_string(e) + "] must be sorted");
    }
    if (audio_entity_map.size() != audio_event_categories.size())
        throw ConfigError("vocabulary: audio_entity_map must have one entry per audio event");
    for (int e : audio_entity_map)
        if (e < 0 || e >= n_entities())
            throw ConfigError("vocabulary: audio_entity_map references invalid entity " +
                              std::to_string(e));
}

Vocabulary Vocabulary::builtin() {
    Vocabulary v;
    auto fill = [](std::vector<std::string>& out, const char* prefix, int count) {
        out.reserve(count);
        for (int i = 0; i < count; ++i) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%s_%03d", prefix, i);
            out.emplace_back(buf);
        }
    };
    fill(v.entity_categories, "entity", 150);
    fill(v.predicate_categories, "predicate", 50);
    fill(v.attribute_categories, "attribute", 95);
    fill(v.audio_event_categories, "audio_event", 22);

    // 8 compatible attributes per entity, spread formulaically over the 95
    v.attr_compat.resize(150);
    for (int e = 0; e < 150; ++e) {
        std::set<int> allowed;
        for (int j = 0; j < 8; ++j) allowed.insert((e * 5 + j * 11) % 95);
        v.attr_compat[e].assign(allowed.begin(), allowed.end());
    }

    // audio event k evidences entity category 7k mod 150 (gcd(7,150)=1, so the
    // 22 targets are distinct and include head and tail categories)
    v.audio_entity_map.resize(22);
    for (int k = 0; k < 22; ++k) v.audio_entity_map[k] = (7 * k) % 150;

    return v;
}

std::string Vocabulary::to_json() const {
    json j;
    j["entity_categories"] = entity_categories;
    j["predicate_categories"] = predicate_categories;
    j["attribute_categories"] = attribute_categories;
    j["audio_event_categories"] = audio_event_categories;
    json compat = json::object();
    for (size_t e = 0; e < attr_compat.size(); ++e)
        if (!attr_compat[e].empty()) compat[std::to_string(e)] = attr_compat[e];
    j["attr_compat"] = compat;
    j["audio_entity_map"] = audio_entity_map;
    return j.dump(2);
}

Vocabulary Vocabulary::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("vocabulary: ") + e.what());
    }
    Vocabulary v;
    try {
        j.at("entity_categories").get_to(v.entity_categories);
        j.at("predicate_categories").get_to(v.predicate_categories);
        j.at("attribute_categories").get_to(v.attribute_categories);
        j.at("audio_event_categories").get_to(v.audio_event_categories);
        v.attr_compat.assign(v.entity_categories.size(), {});
        for (const auto& [key, val] : j.at("attr_compat").items()) {
            size_t pos = 0;
            const int e = std::stoi(key, &pos);
            if (pos != key.size() || e < 0 || e >= v.n_entities())
                throw ConfigError("vocabulary: attr_compat key '" + key +
                                  "' is not a valid entity index");
            val.get_to(v.attr_compat[e]);
            std::sort(v.attr_compat[e].begin(), v.attr_compat[e].end());
        }
        if (j.contains("audio_entity_map")) {
            j.at("audio_entity_map").get_to(v.audio_entity_map);
        } else {
            // default: audio event k maps to entity category k
            v.audio_entity_map.resize(v.audio_event_categories.size());
            for (size_t k = 0; k < v.audio_entity_map.size(); ++k)
                v.audio_entity_map[k] = static_cast<int>(k) % v.n_entities();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("vocabulary: ") + e.what());
    }
    v.validate();
    return v;
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open vocabulary file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write vocabulary file: " + path);
    out << to_json() << "\n";
}

}  // namespace oarlink
