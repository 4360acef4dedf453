#include "oarlink/scheduler.hpp"

#include <algorithm>
#include <array>

#include "oarlink/core.hpp"

namespace oarlink {

void StreamProfile::validate() const {
    if (!(u_obj > u_rel && u_rel > u_attr))
        throw ConfigError("stream profile: utilities must satisfy u_obj > u_rel > u_attr");
    if (r_obj <= 0 || r_rel <= 0 || r_attr <= 0)
        throw ConfigError("stream profile: stream rates must be positive");
}

namespace {

double mask_utility(const TransmissionMask& m, const StreamProfile& p) {
    return (m.obj ? p.u_obj : 0.0) + (m.rel ? p.u_rel : 0.0) + (m.attr ? p.u_attr : 0.0);
}

int mask_symbols(const TransmissionMask& m, const StreamProfile& p) {
    return (m.obj ? p.r_obj : 0) + (m.rel ? p.r_rel : 0) + (m.attr ? p.r_attr : 0);
}

// level order used for tie breaking: the three defined levels, then the
// nonstandard mask
constexpr std::array<TransmissionMask, 4> kMaskOrder = {
    TransmissionMask{true, false, false},
    TransmissionMask{true, true, false},
    TransmissionMask{true, true, true},
    TransmissionMask{true, false, true},
};

}  // namespace

MaskDecision optimize_mask(const StreamProfile& profile, int budget_symbols) {
    profile.validate();
    if (budget_symbols < 0) throw ConfigError("optimize_mask: budget must be >= 0");

    MaskDecision best;
    bool found = false;
    // all 8 masks; the object-off ones can never win because any feasible mask
    // keeps obj on (the floor below covers budgets too small even for obj)
    for (const auto& m : kMaskOrder) {
        const int symbols = mask_symbols(m, profile);
        if (symbols > budget_symbols) continue;
        const double utility = mask_utility(m, profile);
        if (!found || utility > best.utility ||
            (utility == best.utility && symbols < best.symbols)) {
            best.mask = m;
            best.utility = utility;
            best.symbols = symbols;
            found = true;
        }
    }
    if (!found) {
        best.mask = TransmissionMask{true, false, false};
        best.over_budget = true;
        best.utility = mask_utility(best.mask, profile);
        best.symbols = mask_symbols(best.mask, profile);
    }

    // smallest lambda >= 0 for which the chosen mask maximizes
    // sum(M U) - lambda * sum(M R) over all masks
    double lambda = 0.0;
    for (const auto& m : kMaskOrder) {
        const int symbols = mask_symbols(m, profile);
        const double utility = mask_utility(m, profile);
        if (symbols > best.symbols)
            lambda = std::max(lambda, (utility - best.utility) / (symbols - best.symbols));
    }
    best.lambda = std::max(lambda, 0.0);
    return best;
}

int mask_to_level(const TransmissionMask& m) {
    if (m == TransmissionMask{true, false, false}) return 1;
    if (m == TransmissionMask{true, true, false}) return 2;
    if (m == TransmissionMask{true, true, true}) return 3;
    return 0;
}

TransmissionMask level_mask(int level) {
    switch (level) {
        case 1: return {true, false, false};
        case 2: return {true, true, false};
        case 3: return {true, true, true};
    }
    throw ConfigError("level must be 1, 2 or 3");
}

void CsiPolicy::validate() const {
    if (budgets.empty()) throw ConfigError("csi policy: empty budget table");
    if (budgets.size() != thresholds_db.size() + 1)
        throw ConfigError("csi policy: need one more budget than thresholds");
    for (size_t i = 1; i < thresholds_db.size(); ++i)
        if (thresholds_db[i] <= thresholds_db[i - 1])
            throw ConfigError("csi policy: thresholds must be strictly increasing");
    for (int b : budgets)
        if (b < 0) throw ConfigError("csi policy: budgets must be >= 0");
}

int csi_to_budget(double snr_db, const CsiPolicy& policy) {
    policy.validate();
    size_t idx = 0;
    while (idx < policy.thresholds_db.size() && snr_db >= policy.thresholds_db[idx]) ++idx;
    return policy.budgets[idx];
}

CsiPolicy default_csi_policy() { return CsiPolicy{{4.0, 8.0}, {960, 1920, 2880}}; }

}  // namespace oarlink
