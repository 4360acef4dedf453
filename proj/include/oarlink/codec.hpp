#pragma once

#include "oarlink/codebook.hpp"
#include "oarlink/graph.hpp"

namespace oarlink {

enum class Stream { obj = 0, attr = 1, rel = 2 };

const char* stream_name(Stream s);

// One stream's channel symbols. If transmitted is false the symbols are all
// zero (the receiver-side zero-padding contract).
struct SymbolBlock {
    Stream stream = Stream::obj;
    Matrix symbols;  // N x D_c
    bool transmitted = true;
};

struct BlockSet {
    SymbolBlock obj;
    SymbolBlock attr;
    SymbolBlock rel;
};

// N x D latent blocks produced by the encoder.
struct LatentBlocks {
    Matrix obj;
    Matrix attr;
    Matrix rel;
};

struct EncodeResult {
    LatentBlocks latents;
    int truncated_objects = 0;  // evidence beyond the slot ceiling, dropped
};

// Relabels slots by descending confidence (ties by original slot); the
// encoder's slot assignment, exposed so tests can compare decoder output
// against relabeled evidence.
OarGraph canonical_slots(const OarGraph& g);

// Evidence objects are ranked by confidence into slots 0..; each row carries
// the item's codeword scaled by its confidence. Unassigned rows stay null.
EncodeResult encode(const OarGraph& evidence, const Codebook& cb);

// Row-wise projection D -> D_c and its scaled transpose D_c -> D.
Matrix compress(const Matrix& latent, const Codebook& cb);
Matrix decompress(const Matrix& symbols, const Codebook& cb);

// Cascaded decoding: entity anchors first, then compatibility-constrained
// attributes (side information from the vocabulary), then relations restricted
// to detected-slot ordered pairs. Any input yields a valid (possibly empty)
// graph. Detection confidences are logistic-squashed correlations
// 1/(1+exp(-8(r-0.5))).
OarGraph decode_cascade(const BlockSet& blocks, const Codebook& cb, const Vocabulary& vocab,
                        double theta = 0.5);

// Uniform-analog ablation: the three latent rows are concatenated per slot and
// compressed together into sym_per_slot channel symbols (no stream priority).
Matrix encode_uniform(const OarGraph& evidence, const Codebook& cb, int sym_per_slot,
                      int* truncated_objects = nullptr);
OarGraph decode_uniform(const Matrix& symbols, const Codebook& cb, int sym_per_slot,
                        const Vocabulary& vocab, double theta = 0.5);

double squash_correlation(double r);

}  // namespace oarlink
