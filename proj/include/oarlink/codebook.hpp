#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oarlink/core.hpp"
#include "oarlink/vocab.hpp"

namespace oarlink {

// Matched filters used by the cascaded decoder, all in the channel-symbol
// domain (filter = projection * embedded codeword).
struct FilterBank {
    int sym_dim = 0;
    Matrix entity;      // n_entities x sym_dim
    Matrix attribute;   // n_attributes x sym_dim
    Matrix subject;     // N x sym_dim (pair code in the subject block)
    Matrix object_pos;  // N x sym_dim (pair code in the object block)
    Matrix predicate;   // n_predicates x sym_dim
};

// Relation rows mix the three components with equal weight; weights are shared
// by encoder and decoder.
constexpr double kRelWeight = 0.57735026918962576;  // 1/sqrt(3)

// Deterministic codebook: unit-norm codeword families plus the D -> D_c
// compression projection. The projection is block-diagonal over the relation
// row layout [D/4 | D/4 | D/2], with orthonormal rows scaled by sqrt(D/D_c).
// Codewords are rejection-sampled so that every compressed filter f satisfies
// |f|^2 in [0.8, 1.25] and every same-family filter pair satisfies
// |<f_i, f_j>| <= 0.6; with detection threshold 0.5 this makes the noiseless
// cascade exact for any evidence confidence above 0.625.
class Codebook {
  public:
    static constexpr double kDistortionLow = 0.65;   // verified bound on <P'Pc, c>
    static constexpr double kDistortionHigh = 1.35;
    static constexpr double kRejectNormLow = 0.8;    // construction window
    static constexpr double kRejectNormHigh = 1.25;
    static constexpr double kRejectCoherence = 0.6;
    static constexpr double kMaxFamilyCoherence = 0.5;  // original-domain bound

    static Codebook build(const Vocabulary& vocab, uint64_t seed);
    static Codebook build(int n_entities, int n_attributes, int n_predicates, uint64_t seed,
                          int latent_dim = 256, int channel_dim = 32, int slots = 30);

    int latent_dim() const { return latent_dim_; }
    int channel_dim() const { return channel_dim_; }
    int slots() const { return slots_; }
    uint64_t seed() const { return seed_; }

    const Matrix& entity_codewords() const { return entity_; }
    const Matrix& attribute_codewords() const { return attribute_; }
    const Matrix& predicate_codewords() const { return predicate_; }  // dim D/2
    const Matrix& pair_codes() const { return pair_; }                // dim D/4
    const Matrix& projection() const { return projection_; }          // D_c x D

    const FilterBank& stream_filters() const { return stream_bank_; }

    // Uniform-analog mode: one shared projection over the concatenated
    // [obj|attr|rel] latent row (3D wide) per symbol budget level.
    const Matrix& uniform_projection(int sym_per_slot) const;   // sym_per_slot x 3D
    const FilterBank& uniform_filters(int sym_per_slot) const;  // throws ConfigError if unknown

    // Embedded latent-row templates (dimension D).
    void write_entity_row(int category, double scale, double* row) const;
    void write_attribute_row(int attribute, double scale, double* row) const;
    void write_relation_row(int subject_slot, int object_slot, int predicate, double scale,
                            double* row) const;

    // Empty when all invariants hold: unit norms, family coherence <= 0.5,
    // P P^T = (D/D_c) I, and the compression round trip of every codeword
    // within [0.65, 1.35].
    std::vector<std::string> verify() const;

    void save(const std::string& path) const;
    static Codebook load(const std::string& path);

  private:
    Codebook() = default;
    void build_derived();

    int latent_dim_ = 256;
    int channel_dim_ = 32;
    int slots_ = 30;
    uint64_t seed_ = 0;
    Matrix entity_;
    Matrix attribute_;
    Matrix predicate_;
    Matrix pair_;
    Matrix projection_;

    // derived
    FilterBank stream_bank_;
    std::array<Matrix, 3> uniform_projection_;  // for D_c, 2 D_c, 3 D_c symbols per slot
    std::array<FilterBank, 3> uniform_bank_;
};

}  // namespace oarlink
