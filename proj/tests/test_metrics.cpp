#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oarlink/core.hpp"
#include "oarlink/metrics.hpp"

using namespace oarlink;

TEST_CASE("recall and precision at k on exact matches") {
    const std::vector<int> gt = {1, 2, 3};
    const std::vector<std::pair<int, double>> pred = {{1, 0.9}, {2, 0.8}, {3, 0.7}};
    const auto [r, p] = recall_precision_at_k(gt, pred, 3);
    CHECK(r == doctest::Approx(1.0));
    CHECK(p == doctest::Approx(1.0));
}

TEST_CASE("late match beyond k is not counted") {
    std::vector<Triplet> gt = {{1, 0, 2}, {3, 1, 4}};
    std::vector<std::pair<Triplet, double>> pred;
    pred.push_back({{1, 0, 2}, 1.0});
    for (int i = 0; i < 58; ++i) pred.push_back({{9, 9, 9}, 0.5 - i * 0.001});
    pred.push_back({{3, 1, 4}, 0.1});  // rank 60
    const auto [r, p] = recall_precision_at_k(gt, pred, 50);
    CHECK(r == doctest::Approx(0.5));
    CHECK(p == doctest::Approx(1.0 / 50));
}

TEST_CASE("empty ground truth scores recall one") {
    const std::vector<int> gt;
    const std::vector<std::pair<int, double>> pred = {{1, 0.9}};
    const auto [r, p] = recall_precision_at_k(gt, pred, 5);
    CHECK(r == doctest::Approx(1.0));
    CHECK(p == doctest::Approx(0.0));  // spurious predictions still cost precision
    const auto [r2, p2] = recall_precision_at_k(gt, {}, 5);
    CHECK(r2 == doctest::Approx(1.0));
    CHECK(p2 == doctest::Approx(1.0));
}

TEST_CASE("multiset matching consumes each ground-truth item once") {
    const std::vector<int> gt = {1, 1};
    const std::vector<std::pair<int, double>> pred = {{1, 0.9}, {1, 0.8}, {1, 0.7}};
    const auto [r, p] = recall_precision_at_k(gt, pred, 3);
    CHECK(r == doctest::Approx(1.0));
    CHECK(p == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("recall is non-decreasing in k") {
    Rng rng(7);
    std::vector<int> gt;
    std::vector<std::pair<int, double>> pred;
    for (int i = 0; i < 20; ++i) gt.push_back(rng.uniform_int(6));
    for (int i = 0; i < 30; ++i) pred.push_back({rng.uniform_int(6), rng.uniform01()});
    std::sort(pred.begin(), pred.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    double prev = 0.0;
    for (int k = 1; k <= 30; ++k) {
        const auto [r, p] = recall_precision_at_k(gt, pred, k);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("mean recall balances predicate classes") {
    std::vector<Triplet> gt = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {5, 2, 6}};
    std::vector<std::pair<Triplet, double>> pred;
    pred.push_back({{0, 1, 2}, 0.9});
    pred.push_back({{0, 1, 3}, 0.8});
    pred.push_back({{0, 1, 4}, 0.7});
    // class 2 fully missed
    CHECK(mean_recall_at_k(gt, pred, 50) == doctest::Approx(0.5));
    // fully recovered
    pred.push_back({{5, 2, 6}, 0.6});
    CHECK(mean_recall_at_k(gt, pred, 50) == doctest::Approx(1.0));
    // single-class gt: mean recall equals plain recall
    std::vector<Triplet> gt_single = {{0, 1, 2}, {0, 1, 3}};
    std::vector<std::pair<Triplet, double>> partial = {{{0, 1, 2}, 0.9}};
    const auto [r, p] = recall_precision_at_k(gt_single, partial, 10);
    CHECK(mean_recall_at_k(gt_single, partial, 10) == doctest::Approx(r));
}

TEST_CASE("alignment distortion analytic values") {
    Matrix z(2, 3);
    z.at(0, 0) = 0.6;
    z.at(0, 1) = -0.8;
    CHECK(alignment_distortion(z, z) == doctest::Approx(0.0).epsilon(1e-9));

    Matrix neg = z;
    for (double& v : neg.data) v = -v;
    const double l1 = 2.0 * (0.6 + 0.8);
    CHECK(alignment_distortion(neg, z) == doctest::Approx(20.0 + l1).epsilon(1e-9));

    const Matrix zero(2, 3);
    CHECK(alignment_distortion(zero, zero) == 0.0);
    // one side zero: cosine 0, so the angular term is 10
    CHECK(alignment_distortion(zero, z) == doctest::Approx(10.0 + 0.6 + 0.8));
    CHECK_THROWS_AS(alignment_distortion(Matrix(1, 2), Matrix(2, 1)), ConfigError);
}

TEST_CASE("aggregate means, stds and order independence") {
    MetricReport a, b;
    a.obj_recall = {0.4, 0.4, 0.4};
    b.obj_recall = {0.6, 0.6, 0.6};
    a.failure = true;

    const MetricSummary single = aggregate({a});
    CHECK(single.count == 1);
    CHECK(single.obj_recall_mean[0] == doctest::Approx(0.4));
    CHECK(single.obj_recall_std[0] == 0.0);
    CHECK(single.fail_rate == doctest::Approx(1.0));

    const MetricSummary s1 = aggregate({a, b});
    const MetricSummary s2 = aggregate({b, a});
    CHECK(s1.obj_recall_mean[0] == doctest::Approx(0.5));
    CHECK(s1.fail_rate == doctest::Approx(0.5));
    // bitwise identical regardless of trial order
    CHECK(s1.obj_recall_mean[0] == s2.obj_recall_mean[0]);
    CHECK(s1.obj_recall_std[0] == s2.obj_recall_std[0]);
    CHECK(s1.ged_raw_mean == s2.ged_raw_mean);

    CHECK(aggregate({}).count == 0);
}

TEST_CASE("ranked predictions sort by confidence and keep slot ties stable") {
    OarGraph g;
    g.nodes.push_back({0, 5, std::nullopt, 0.5});
    g.nodes.push_back({1, 6, std::nullopt, 0.9});
    g.nodes.push_back({2, 7, std::nullopt, 0.5});
    g.edges.push_back({1, 0, 3, 0.7});
    const RankedPredictions r = rank_predictions(g);
    REQUIRE(r.objects.size() == 3);
    CHECK(r.objects[0].first == 6);
    CHECK(r.objects[1].first == 5);  // stable tie
    CHECK(r.objects[2].first == 7);
    REQUIRE(r.triplets.size() == 1);
    CHECK(r.triplets[0].first == Triplet{6, 3, 5});
}

TEST_CASE("fixed csv float formatting") {
    CHECK(fmt_g6(0.0) == "0");
    CHECK(fmt_g6(1.0) == "1");
    CHECK(fmt_g6(0.123456789) == "0.123457");
    CHECK(fmt_g6(-0.0) == "0");
    CHECK(fmt_g6(2880.0 / 196608.0) == "0.0146484");
}
