#pragma once

#include "oarlink/graph.hpp"

namespace oarlink {

struct GedCosts {
    double node_sub = 1.0;
    double node_indel = 1.0;
    double edge_sub = 1.0;
    double edge_indel = 1.0;
};

struct GedResult {
    double raw = 0.0;
    double normalized = 0.0;
    bool approximate = false;
};

// Graph edit distance between two O-A-R graphs. Nodes match by category (an
// attribute mismatch on equal categories costs half a substitution); slots are
// transport artifacts and never compared. Edges are charged through the node
// mapping. normalized = raw / max(1, |V1|+|E1|, |V2|+|E2|).
//
// The default entry point runs the exact search when |V1|+|V2| <= 12 and the
// assignment-based upper bound above that (flagged approximate).
GedResult ged(const OarGraph& g1, const OarGraph& g2, const GedCosts& costs = {});

// Exact minimum via A* over node mappings. Exponential; intended for small
// graphs only.
GedResult ged_exact(const OarGraph& g1, const OarGraph& g2, const GedCosts& costs = {});

// Upper bound: Hungarian assignment on a local-structure cost matrix, the
// induced edit cost of that mapping, then 2-opt refinement on small instances.
// Always >= the exact distance.
GedResult ged_approximate(const OarGraph& g1, const OarGraph& g2, const GedCosts& costs = {});

}  // namespace oarlink
