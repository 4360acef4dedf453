#pragma once

#include <string>
#include <vector>

namespace oarlink {

// Per-stream semantic utilities and symbol costs. The hierarchy U_obj > U_rel
// > U_attr is a hard invariant.
struct StreamProfile {
    double u_obj = 10.0;
    double u_rel = 3.0;
    double u_attr = 2.0;
    int r_obj = 960;
    int r_rel = 960;
    int r_attr = 960;

    void validate() const;  // throws ConfigError
};

struct TransmissionMask {
    bool obj = true;
    bool rel = false;
    bool attr = false;

    bool operator==(const TransmissionMask&) const = default;
};

struct MaskDecision {
    TransmissionMask mask;
    bool over_budget = false;  // budget below the object-stream floor
    double utility = 0.0;
    int symbols = 0;
    double lambda = 0.0;  // smallest multiplier making the mask optimal in the
                          // relaxed objective; diagnostic only
};

// Maximize sum(M_t * U_t) subject to sum(M_t * R_t) <= budget over the 8
// binary masks, with the object stream always on. Ties break toward fewer
// symbols, then level order. budget below r_obj returns [1,0,0] flagged
// over budget.
MaskDecision optimize_mask(const StreamProfile& profile, int budget_symbols);

// [1,0,0] -> 1, [1,1,0] -> 2, [1,1,1] -> 3, anything else -> 0 (nonstandard).
int mask_to_level(const TransmissionMask& m);
TransmissionMask level_mask(int level);  // throws ConfigError unless 1..3

// Piecewise-constant CSI lookup: budgets[i] applies to snr in
// [thresholds[i-1], thresholds[i]), lower-inclusive; budgets has one more
// entry than thresholds.
struct CsiPolicy {
    std::vector<double> thresholds_db;
    std::vector<int> budgets;

    void validate() const;  // throws ConfigError
};

int csi_to_budget(double snr_db, const CsiPolicy& policy);

// snr < 4 dB -> 960; [4, 8) -> 1920; >= 8 -> 2880.
CsiPolicy default_csi_policy();

}  // namespace oarlink
