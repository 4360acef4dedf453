#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "oarlink/core.hpp"
#include "oarlink/scheduler.hpp"

using namespace oarlink;

namespace {

// independent brute force over all 8 masks under the documented rules:
// feasible, object stream on, max utility, ties to fewer symbols then level
// order; below the object floor return [1,0,0] flagged
MaskDecision brute_force(const StreamProfile& p, int budget) {
    const TransmissionMask order[4] = {
        {true, false, false}, {true, true, false}, {true, true, true}, {true, false, true}};
    MaskDecision best;
    bool found = false;
    for (int bits = 0; bits < 8; ++bits) {
        TransmissionMask m{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0};
        if (!m.obj) continue;
        const int symbols = (m.obj ? p.r_obj : 0) + (m.rel ? p.r_rel : 0) + (m.attr ? p.r_attr : 0);
        if (symbols > budget) continue;
        const double utility =
            (m.obj ? p.u_obj : 0) + (m.rel ? p.u_rel : 0) + (m.attr ? p.u_attr : 0);
        auto level_rank = [&](const TransmissionMask& x) {
            for (int i = 0; i < 4; ++i)
                if (order[i] == x) return i;
            return 4;
        };
        if (!found || utility > best.utility ||
            (utility == best.utility && symbols < best.symbols) ||
            (utility == best.utility && symbols == best.symbols &&
             level_rank(m) < level_rank(best.mask))) {
            best.mask = m;
            best.utility = utility;
            best.symbols = symbols;
            found = true;
        }
    }
    if (!found) {
        best.mask = {true, false, false};
        best.over_budget = true;
        best.utility = p.u_obj;
        best.symbols = p.r_obj;
    }
    return best;
}

}  // namespace

TEST_CASE("default profile reaches exactly the three operating levels") {
    const StreamProfile p;
    CHECK(optimize_mask(p, 960).mask == TransmissionMask{true, false, false});
    CHECK(optimize_mask(p, 1920).mask == TransmissionMask{true, true, false});
    CHECK(optimize_mask(p, 2880).mask == TransmissionMask{true, true, true});
    // relation beats attribute at the mid budget
    CHECK(mask_to_level(optimize_mask(p, 1920).mask) == 2);
    // sweep every budget: only levels 1..3 are reachable
    for (int b = 0; b <= 4000; b += 10) {
        const int level = mask_to_level(optimize_mask(p, b).mask);
        CHECK(level >= 1);
        CHECK(level <= 3);
    }
}

TEST_CASE("matches brute force on random instances") {
    Rng rng(2024);
    for (int t = 0; t < 1000; ++t) {
        StreamProfile p;
        p.u_attr = 1.0 + 9.0 * rng.uniform01();
        p.u_rel = p.u_attr + 0.1 + 5.0 * rng.uniform01();
        p.u_obj = p.u_rel + 0.1 + 10.0 * rng.uniform01();
        p.r_obj = 1 + rng.uniform_int(2000);
        p.r_rel = 1 + rng.uniform_int(2000);
        p.r_attr = 1 + rng.uniform_int(2000);
        const int budget = rng.uniform_int(5000);
        const MaskDecision got = optimize_mask(p, budget);
        const MaskDecision want = brute_force(p, budget);
        CAPTURE(t);
        CHECK(got.mask == want.mask);
        CHECK(got.over_budget == want.over_budget);
        CHECK(got.utility == doctest::Approx(want.utility));
    }
}

TEST_CASE("utility is monotone in the budget") {
    const StreamProfile p;
    double prev = -1.0;
    for (int b = 0; b <= 3200; b += 16) {
        const double u = optimize_mask(p, b).utility;
        CHECK(u >= prev);
        prev = u;
    }
}

TEST_CASE("greedy priority fill equals enumeration for equal rates") {
    StreamProfile p;
    p.u_obj = 9.0;
    p.u_rel = 5.0;
    p.u_attr = 1.5;
    for (int b = 0; b < 4000; b += 4) {
        TransmissionMask greedy{true, false, false};
        int used = p.r_obj;
        if (used + p.r_rel <= b) {
            greedy.rel = true;
            used += p.r_rel;
        }
        if (used + p.r_attr <= b) greedy.attr = true;
        const MaskDecision got = optimize_mask(p, b);
        if (!got.over_budget) CHECK(got.mask == greedy);
    }
}

TEST_CASE("budget floor keeps the object stream with a flag") {
    const StreamProfile p;
    const MaskDecision d = optimize_mask(p, 100);
    CHECK(d.mask == TransmissionMask{true, false, false});
    CHECK(d.over_budget);
    CHECK(d.symbols == 960);
    CHECK_FALSE(optimize_mask(p, 960).over_budget);
    CHECK_THROWS_AS(optimize_mask(p, -1), ConfigError);
}

TEST_CASE("chosen mask never exceeds the budget unless flagged") {
    Rng rng(7);
    for (int t = 0; t < 300; ++t) {
        StreamProfile p;
        p.u_attr = 1;
        p.u_rel = 2;
        p.u_obj = 10;
        p.r_obj = 1 + rng.uniform_int(1500);
        p.r_rel = 1 + rng.uniform_int(1500);
        p.r_attr = 1 + rng.uniform_int(1500);
        const int budget = rng.uniform_int(4000);
        const MaskDecision d = optimize_mask(p, budget);
        if (!d.over_budget) CHECK(d.symbols <= budget);
        CHECK(d.lambda >= 0.0);
    }
}

TEST_CASE("mask to level mapping") {
    CHECK(mask_to_level({true, false, false}) == 1);
    CHECK(mask_to_level({true, true, false}) == 2);
    CHECK(mask_to_level({true, true, true}) == 3);
    CHECK(mask_to_level({true, false, true}) == 0);  // nonstandard
    CHECK(level_mask(2) == TransmissionMask{true, true, false});
    CHECK_THROWS_AS(level_mask(4), ConfigError);
}

TEST_CASE("profile hierarchy is enforced") {
    StreamProfile p;
    p.u_rel = p.u_obj;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    StreamProfile q;
    q.r_rel = 0;
    CHECK_THROWS_AS(q.validate(), ConfigError);
}

TEST_CASE("csi lookup uses lower-inclusive half-open intervals") {
    const CsiPolicy policy = default_csi_policy();
    CHECK(csi_to_budget(0.0, policy) == 960);
    CHECK(csi_to_budget(3.999, policy) == 960);
    CHECK(csi_to_budget(4.0, policy) == 1920);
    CHECK(csi_to_budget(7.999, policy) == 1920);
    CHECK(csi_to_budget(8.0, policy) == 2880);
    CHECK(csi_to_budget(10.0, policy) == 2880);
    CHECK(csi_to_budget(-5.0, policy) == 960);
}

TEST_CASE("bad csi policies are configuration errors") {
    CHECK_THROWS_AS(csi_to_budget(1.0, CsiPolicy{}), ConfigError);
    CHECK_THROWS_AS(csi_to_budget(1.0, CsiPolicy{{4.0, 4.0}, {1, 2, 3}}), ConfigError);
    CHECK_THROWS_AS(csi_to_budget(1.0, CsiPolicy{{4.0}, {1}}), ConfigError);
}
