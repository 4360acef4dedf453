#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "oarlink/core.hpp"
#include "oarlink/graph.hpp"

namespace oarlink {

// (subject category, predicate, object category)
struct Triplet {
    int subject = 0;
    int predicate = 0;
    int object = 0;
    auto operator<=>(const Triplet&) const = default;
};

// Predictions ranked by confidence, highest first.
struct RankedPredictions {
    std::vector<std::pair<int, double>> objects;       // entity category, confidence
    std::vector<std::pair<Triplet, double>> triplets;  // category triplet, confidence
};

RankedPredictions rank_predictions(const OarGraph& decoded);
std::vector<int> gt_object_categories(const OarGraph& gt);
std::vector<Triplet> gt_triplets(const OarGraph& gt);

// Top-k category-multiset matching; each ground-truth item is matchable once,
// greedily by rank. Empty ground truth scores recall 1; an empty prediction
// list scores precision 1 (nothing asserted, nothing wrong).
std::pair<double, double> recall_precision_at_k(const std::vector<int>& gt,
                                                const std::vector<std::pair<int, double>>& ranked,
                                                int k);
std::pair<double, double> recall_precision_at_k(
    const std::vector<Triplet>& gt, const std::vector<std::pair<Triplet, double>>& ranked, int k);

// Recall@k computed per predicate category that occurs in the ground truth,
// then averaged over those categories.
double mean_recall_at_k(const std::vector<Triplet>& gt,
                        const std::vector<std::pair<Triplet, double>>& ranked, int k);

// 10 * (1 - cos(z_hat, z)) + |z_hat - z|_1 over the flattened matrices. The
// zero-zero pair has cosine 1 (distortion 0); zero against nonzero has cosine
// 0 (full angular penalty).
double alignment_distortion(const Matrix& z_hat, const Matrix& z);

constexpr std::array<int, 3> kObjectKs = {5, 10, 20};
constexpr std::array<int, 4> kRelationKs = {10, 15, 20, 50};

struct MetricReport {
    std::array<double, 3> obj_recall{};      // at k = 5, 10, 20
    std::array<double, 3> obj_precision{};
    std::array<double, 4> rel_recall{};      // at k = 10, 15, 20, 50
    std::array<double, 4> rel_mean_recall{};
    double ged_raw = 0.0;
    double ged_normalized = 0.0;
    bool ged_approximate = false;
    std::array<double, 3> d_align_stream{};  // obj, attr, rel
    double d_align = 0.0;                    // summed over transmitted streams
    bool failure = false;
};

// Fills the recall/precision and GED fields from the graph pair; alignment
// and failure are the caller's.
MetricReport evaluate_graphs(const OarGraph& gt, const OarGraph& decoded);

struct MetricSummary {
    int count = 0;
    double fail_rate = 0.0;
    std::array<double, 3> obj_recall_mean{}, obj_precision_mean{};
    std::array<double, 4> rel_recall_mean{}, rel_mean_recall_mean{};
    double ged_raw_mean = 0.0, ged_norm_mean = 0.0, d_align_mean = 0.0;
    std::array<double, 3> obj_recall_std{};
};

// Per-metric mean / sample std / failure rate; independent of trial order.
MetricSummary aggregate(const std::vector<MetricReport>& trials);

}  // namespace oarlink
