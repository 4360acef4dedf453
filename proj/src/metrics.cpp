#include "oarlink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "oarlink/ged.hpp"

namespace oarlink {

RankedPredictions rank_predictions(const OarGraph& decoded) {
    RankedPredictions out;
    std::map<int, const ObjectNode*> by_slot;
    for (const auto& n : decoded.nodes) {
        out.objects.push_back({n.category, n.confidence});
        by_slot[n.slot] = &n;
    }
    std::stable_sort(out.objects.begin(), out.objects.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& e : decoded.edges) {
        const auto s = by_slot.find(e.subject_slot);
        const auto o = by_slot.find(e.object_slot);
        if (s == by_slot.end() || o == by_slot.end()) continue;
        out.triplets.push_back(
            {Triplet{s->second->category, e.predicate, o->second->category}, e.confidence});
    }
    std::stable_sort(out.triplets.begin(), out.triplets.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

std::vector<int> gt_object_categories(const OarGraph& gt) {
    std::vector<int> cats;
    cats.reserve(gt.nodes.size());
    for (const auto& n : gt.nodes) cats.push_back(n.category);
    return cats;
}

std::vector<Triplet> gt_triplets(const OarGraph& gt) {
    std::vector<Triplet> out;
    out.reserve(gt.edges.size());
    for (const auto& e : gt.edges) {
        const ObjectNode* s = gt.find_slot(e.subject_slot);
        const ObjectNode* o = gt.find_slot(e.object_slot);
        if (!s || !o) continue;
        out.push_back({s->category, e.predicate, o->category});
    }
    return out;
}

namespace {

template <typename K>
std::pair<double, double> rp_at_k(const std::vector<K>& gt,
                                  const std::vector<std::pair<K, double>>& ranked, int k) {
    if (k < 1) throw ConfigError("recall@k: k must be >= 1");
    std::multiset<K> pool(gt.begin(), gt.end());
    const int considered = std::min<int>(k, static_cast<int>(ranked.size()));
    int matched = 0;
    for (int i = 0; i < considered; ++i) {
        const auto it = pool.find(ranked[i].first);
        if (it != pool.end()) {
            pool.erase(it);
            ++matched;
        }
    }
    const double recall = gt.empty() ? 1.0 : static_cast<double>(matched) / gt.size();
    const double precision =
        considered == 0 ? 1.0 : static_cast<double>(matched) / considered;
    return {recall, precision};
}

}  // namespace

std::pair<double, double> recall_precision_at_k(const std::vector<int>& gt,
                                                const std::vector<std::pair<int, double>>& ranked,
                                                int k) {
    return rp_at_k(gt, ranked, k);
}

std::pair<double, double> recall_precision_at_k(
    const std::vector<Triplet>& gt, const std::vector<std::pair<Triplet, double>>& ranked,
    int k) {
    return rp_at_k(gt, ranked, k);
}

double mean_recall_at_k(const std::vector<Triplet>& gt,
                        const std::vector<std::pair<Triplet, double>>& ranked, int k) {
    if (k < 1) throw ConfigError("mean_recall@k: k must be >= 1");
    std::map<int, std::vector<Triplet>> gt_by_pred;
    for (const auto& t : gt) gt_by_pred[t.predicate].push_back(t);
    if (gt_by_pred.empty()) return 1.0;
    double sum = 0.0;
    for (const auto& [pred, gts] : gt_by_pred) {
        // predictions keep their global rank; only matching is per category
        std::multiset<Triplet> pool(gts.begin(), gts.end());
        const int considered = std::min<int>(k, static_cast<int>(ranked.size()));
        int matched = 0;
        for (int i = 0; i < considered; ++i) {
            if (ranked[i].first.predicate != pred) continue;
            const auto it = pool.find(ranked[i].first);
            if (it != pool.end()) {
                pool.erase(it);
                ++matched;
            }
        }
        sum += static_cast<double>(matched) / gts.size();
    }
    return sum / static_cast<double>(gt_by_pred.size());
}

double alignment_distortion(const Matrix& z_hat, const Matrix& z) {
    if (z_hat.rows != z.rows || z_hat.cols != z.cols)
        throw ConfigError("alignment_distortion: shape mismatch");
    double dot = 0.0, n_hat = 0.0, n_ref = 0.0, l1 = 0.0;
    for (size_t i = 0; i < z.data.size(); ++i) {
        const double a = z_hat.data[i];
        const double b = z.data[i];
        dot += a * b;
        n_hat += a * a;
        n_ref += b * b;
        l1 += std::abs(a - b);
    }
    double cosine;
    if (n_hat == 0.0 && n_ref == 0.0)
        cosine = 1.0;  // zero against zero: no distortion
    else if (n_hat == 0.0 || n_ref == 0.0)
        cosine = 0.0;  // one side silent: maximum angular penalty
    else
        cosine = dot / (std::sqrt(n_hat) * std::sqrt(n_ref));
    return 10.0 * (1.0 - cosine) + l1;
}

MetricReport evaluate_graphs(const OarGraph& gt, const OarGraph& decoded) {
    MetricReport r;
    const RankedPredictions pred = rank_predictions(decoded);
    const std::vector<int> gt_obj = gt_object_categories(gt);
    const std::vector<Triplet> gt_rel = gt_triplets(gt);
    for (size_t i = 0; i < kObjectKs.size(); ++i) {
        const auto [rec, prec] = recall_precision_at_k(gt_obj, pred.objects, kObjectKs[i]);
        r.obj_recall[i] = rec;
        r.obj_precision[i] = prec;
    }
    for (size_t i = 0; i < kRelationKs.size(); ++i) {
        const auto [rec, prec] = recall_precision_at_k(gt_rel, pred.triplets, kRelationKs[i]);
        (void)prec;
        r.rel_recall[i] = rec;
        r.rel_mean_recall[i] = mean_recall_at_k(gt_rel, pred.triplets, kRelationKs[i]);
    }
    const GedResult g = ged(gt, decoded);
    r.ged_raw = g.raw;
    r.ged_normalized = g.normalized;
    r.ged_approximate = g.approximate;
    return r;
}

namespace {

double mean_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t n = v.size();
    return stable_sum(std::move(v)) / static_cast<double>(n);
}

double std_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    std::vector<double> sq(v.size());
    for (size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
    return std::sqrt(stable_sum(std::move(sq)) / static_cast<double>(v.size() - 1));
}

}  // namespace

MetricSummary aggregate(const std::vector<MetricReport>& trials) {
    MetricSummary s;
    s.count = static_cast<int>(trials.size());
    if (trials.empty()) return s;
    auto collect = [&](auto getter) {
        std::vector<double> vals(trials.size());
        for (size_t i = 0; i < trials.size(); ++i) vals[i] = getter(trials[i]);
        return vals;
    };
    for (size_t k = 0; k < kObjectKs.size(); ++k) {
        auto rec = collect([&](const MetricReport& m) { return m.obj_recall[k]; });
        s.obj_recall_mean[k] = mean_of(rec);
        s.obj_recall_std[k] = std_of(rec, s.obj_recall_mean[k]);
        s.obj_precision_mean[k] =
            mean_of(collect([&](const MetricReport& m) { return m.obj_precision[k]; }));
    }
    for (size_t k = 0; k < kRelationKs.size(); ++k) {
        s.rel_recall_mean[k] =
            mean_of(collect([&](const MetricReport& m) { return m.rel_recall[k]; }));
        s.rel_mean_recall_mean[k] =
            mean_of(collect([&](const MetricReport& m) { return m.rel_mean_recall[k]; }));
    }
    s.ged_raw_mean = mean_of(collect([](const MetricReport& m) { return m.ged_raw; }));
    s.ged_norm_mean = mean_of(collect([](const MetricReport& m) { return m.ged_normalized; }));
    s.d_align_mean = mean_of(collect([](const MetricReport& m) { return m.d_align; }));
    s.fail_rate =
        mean_of(collect([](const MetricReport& m) { return m.failure ? 1.0 : 0.0; }));
    return s;
}

}  // namespace oarlink
