#include "oarlink/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oarlink/kernels.hpp"

namespace oarlink {

const char* stream_name(Stream s) {
    switch (s) {
        case Stream::obj: return "obj";
        case Stream::attr: return "attr";
        case Stream::rel: return "rel";
    }
    return "?";
}

double squash_correlation(double r) { return 1.0 / (1.0 + std::exp(-8.0 * (r - 0.5))); }

OarGraph canonical_slots(const OarGraph& g) {
    std::vector<int> order(g.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.nodes[a].confidence != g.nodes[b].confidence)
            return g.nodes[a].confidence > g.nodes[b].confidence;
        return g.nodes[a].slot < g.nodes[b].slot;
    });
    std::vector<int> slot_map;  // old slot -> new slot
    for (const auto& n : g.nodes)
        slot_map.resize(std::max<size_t>(slot_map.size(), n.slot + 1), -1);
    OarGraph out;
    out.nodes.reserve(g.nodes.size());
    for (size_t rank = 0; rank < order.size(); ++rank) {
        ObjectNode n = g.nodes[order[rank]];
        slot_map[n.slot] = static_cast<int>(rank);
        n.slot = static_cast<int>(rank);
        out.nodes.push_back(n);
    }
    out.edges.reserve(g.edges.size());
    for (RelationEdge e : g.edges) {
        e.subject_slot = slot_map[e.subject_slot];
        e.object_slot = slot_map[e.object_slot];
        out.edges.push_back(e);
    }
    return out;
}

EncodeResult encode(const OarGraph& evidence, const Codebook& cb) {
    const int n_slots = cb.slots();
    EncodeResult result;
    result.latents.obj = Matrix(n_slots, cb.latent_dim());
    result.latents.attr = Matrix(n_slots, cb.latent_dim());
    result.latents.rel = Matrix(n_slots, cb.latent_dim());

    OarGraph canon = canonical_slots(evidence);
    if (static_cast<int>(canon.nodes.size()) > n_slots) {
        result.truncated_objects = static_cast<int>(canon.nodes.size()) - n_slots;
        canon.nodes.resize(n_slots);
        std::erase_if(canon.edges, [&](const RelationEdge& e) {
            return e.subject_slot >= n_slots || e.object_slot >= n_slots;
        });
    }

    for (const auto& node : canon.nodes) {
        cb.write_entity_row(node.category, node.confidence, result.latents.obj.row(node.slot));
        if (node.attribute)
            cb.write_attribute_row(*node.attribute, node.confidence,
                                   result.latents.attr.row(node.slot));
    }

    std::stable_sort(canon.edges.begin(), canon.edges.end(),
                     [](const RelationEdge& a, const RelationEdge& b) {
                         if (a.confidence != b.confidence) return a.confidence > b.confidence;
                         if (a.subject_slot != b.subject_slot)
                             return a.subject_slot < b.subject_slot;
                         return a.object_slot < b.object_slot;
                     });
    if (static_cast<int>(canon.edges.size()) > n_slots) canon.edges.resize(n_slots);
    for (size_t j = 0; j < canon.edges.size(); ++j) {
        const auto& e = canon.edges[j];
        cb.write_relation_row(e.subject_slot, e.object_slot, e.predicate, e.confidence,
                              result.latents.rel.row(static_cast<int>(j)));
    }
    return result;
}

Matrix compress(const Matrix& latent, const Codebook& cb) {
    if (latent.cols != cb.latent_dim())
        throw ConfigError("compress: latent dimension mismatch");
    Matrix out(latent.rows, cb.channel_dim());
    kernels::project_rows(latent.data.data(), latent.rows, latent.cols,
                          cb.projection().data.data(), cb.channel_dim(), out.data.data());
    return out;
}

Matrix decompress(const Matrix& symbols, const Codebook& cb) {
    if (symbols.cols != cb.channel_dim())
        throw ConfigError("decompress: symbol dimension mismatch");
    const Matrix& p = cb.projection();
    Matrix pt(p.cols, p.rows);
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c) pt.at(c, r) = p.at(r, c);
    Matrix out(symbols.rows, cb.latent_dim());
    kernels::project_rows(symbols.data.data(), symbols.rows, symbols.cols, pt.data.data(),
                          pt.rows, out.data.data());
    return out;
}

namespace {

struct RelCandidate {
    int row;
    int subject;
    int object;
    int predicate;
    double confidence;
};

OarGraph decode_core(const Matrix& obj_rows, const Matrix& attr_rows, const Matrix& rel_rows,
                     const FilterBank& bank, const std::vector<std::vector<int>>& attr_compat,
                     double theta) {
    const int n_slots = obj_rows.rows;
    const int dim = bank.sym_dim;
    OarGraph out;

    // Stage 1: entity anchors
    Matrix scores(n_slots, bank.entity.rows);
    kernels::correlate_rows(obj_rows.data.data(), n_slots, bank.entity.data.data(),
                            bank.entity.rows, dim, scores.data.data());
    std::vector<int> detected;
    std::vector<int> category(n_slots, -1);
    for (int i = 0; i < n_slots; ++i) {
        int best = 0;
        double best_r = scores.at(i, 0);
        for (int j = 1; j < bank.entity.rows; ++j)
            if (scores.at(i, j) > best_r) {
                best_r = scores.at(i, j);
                best = j;
            }
        const double conf = squash_correlation(best_r);
        if (conf > theta) {
            detected.push_back(i);
            category[i] = best;
            out.nodes.push_back(ObjectNode{i, best, std::nullopt, conf});
        }
    }

    // Stage 2: attributes, constrained by the decoded category
    for (auto& node : out.nodes) {
        const auto& allowed = attr_compat[node.category];
        if (allowed.empty()) continue;
        const double* row = attr_rows.row(node.slot);
        int best = -1;
        double best_r = -1e300;
        for (int a : allowed) {
            double r = 0.0;
            const double* f = bank.attribute.row(a);
            for (int k = 0; k < dim; ++k) r += row[k] * f[k];
            if (r > best_r) {
                best_r = r;
                best = a;
            }
        }
        if (best >= 0 && squash_correlation(best_r) > theta) node.attribute = best;
    }

    // Stage 3: relations over detected ordered pairs
    if (detected.size() >= 2) {
        std::vector<RelCandidate> candidates;
        std::vector<double> subj_score(detected.size());
        std::vector<double> obj_score(detected.size());
        for (int row_idx = 0; row_idx < n_slots; ++row_idx) {
            const double* row = rel_rows.row(row_idx);
            for (size_t k = 0; k < detected.size(); ++k) {
                const double* fs = bank.subject.row(detected[k]);
                const double* fo = bank.object_pos.row(detected[k]);
                double s = 0.0, o = 0.0;
                for (int c = 0; c < dim; ++c) {
                    s += row[c] * fs[c];
                    o += row[c] * fo[c];
                }
                subj_score[k] = s;
                obj_score[k] = o;
            }
            // best ordered pair with distinct endpoints: compare the top two
            // of each side
            auto top2 = [](const std::vector<double>& v) {
                int i1 = 0;
                for (size_t i = 1; i < v.size(); ++i)
                    if (v[i] > v[i1]) i1 = static_cast<int>(i);
                int i2 = i1 == 0 ? 1 : 0;
                for (size_t i = 0; i < v.size(); ++i)
                    if (static_cast<int>(i) != i1 && v[i] > v[i2]) i2 = static_cast<int>(i);
                return std::pair{i1, i2};
            };
            const auto [s1, s2] = top2(subj_score);
            const auto [o1, o2] = top2(obj_score);
            int su, ov;
            if (s1 != o1) {
                su = s1;
                ov = o1;
            } else if (subj_score[s1] + obj_score[o2] >= subj_score[s2] + obj_score[o1]) {
                su = s1;
                ov = o2;
            } else {
                su = s2;
                ov = o1;
            }
            int best_p = 0;
            double best_pr = -1e300;
            for (int p = 0; p < bank.predicate.rows; ++p) {
                double r = 0.0;
                const double* f = bank.predicate.row(p);
                for (int c = 0; c < dim; ++c) r += row[c] * f[c];
                if (r > best_pr) {
                    best_pr = r;
                    best_p = p;
                }
            }
            const double r_row = kRelWeight * (subj_score[su] + obj_score[ov] + best_pr);
            const double conf = squash_correlation(r_row);
            if (conf > theta)
                candidates.push_back(
                    {row_idx, detected[su], detected[ov], best_p, conf});
        }
        // duplicate ordered pairs: higher confidence wins, ties to the lower
        // row index
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const RelCandidate& a, const RelCandidate& b) {
                             if (a.confidence != b.confidence) return a.confidence > b.confidence;
                             return a.row < b.row;
                         });
        std::vector<std::pair<int, int>> used;
        for (const auto& c : candidates) {
            const std::pair<int, int> key{c.subject, c.object};
            if (std::find(used.begin(), used.end(), key) != used.end()) continue;
            used.push_back(key);
            out.edges.push_back(RelationEdge{c.subject, c.object, c.predicate, c.confidence});
        }
    }
    return out;
}

void require_block(const SymbolBlock& b, Stream s, const Codebook& cb) {
    if (b.stream != s) throw ConfigError("decode: block stream tag mismatch");
    if (b.symbols.rows != cb.slots() || b.symbols.cols != cb.channel_dim())
        throw ConfigError("decode: block dimensions mismatch");
}

}  // namespace

OarGraph decode_cascade(const BlockSet& blocks, const Codebook& cb, const Vocabulary& vocab,
                        double theta) {
    require_block(blocks.obj, Stream::obj, cb);
    require_block(blocks.attr, Stream::attr, cb);
    require_block(blocks.rel, Stream::rel, cb);
    return decode_core(blocks.obj.symbols, blocks.attr.symbols, blocks.rel.symbols,
                       cb.stream_filters(), vocab.attr_compat, theta);
}

Matrix encode_uniform(const OarGraph& evidence, const Codebook& cb, int sym_per_slot,
                      int* truncated_objects) {
    const EncodeResult enc = encode(evidence, cb);
    if (truncated_objects) *truncated_objects = enc.truncated_objects;
    const int d = cb.latent_dim();
    Matrix concat(cb.slots(), 3 * d);
    for (int i = 0; i < cb.slots(); ++i) {
        std::copy(enc.latents.obj.row(i), enc.latents.obj.row(i) + d, concat.row(i));
        std::copy(enc.latents.attr.row(i), enc.latents.attr.row(i) + d, concat.row(i) + d);
        std::copy(enc.latents.rel.row(i), enc.latents.rel.row(i) + d, concat.row(i) + 2 * d);
    }
    const Matrix& u = cb.uniform_projection(sym_per_slot);
    Matrix out(cb.slots(), sym_per_slot);
    kernels::project_rows(concat.data.data(), concat.rows, concat.cols, u.data.data(), u.rows,
                          out.data.data());
    return out;
}

OarGraph decode_uniform(const Matrix& symbols, const Codebook& cb, int sym_per_slot,
                        const Vocabulary& vocab, double theta) {
    if (symbols.rows != cb.slots() || symbols.cols != sym_per_slot)
        throw ConfigError("decode_uniform: symbol dimensions mismatch");
    const FilterBank& bank = cb.uniform_filters(sym_per_slot);
    return decode_core(symbols, symbols, symbols, bank, vocab.attr_compat, theta);
}

}  // namespace oarlink
