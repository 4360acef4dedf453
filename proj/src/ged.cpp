#include "oarlink/ged.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <vector>

#include "oarlink/core.hpp"

namespace oarlink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kDeleted = -1;

struct Prepared {
    std::vector<ObjectNode> nodes;
    // adjacency by node index (not slot)
    std::map<std::pair<int, int>, int> edge_pred;  // (from_idx, to_idx) -> predicate
    int n = 0;
    int m = 0;
};

Prepared prepare(const OarGraph& g) {
    Prepared p;
    p.nodes = g.nodes;
    p.n = static_cast<int>(g.nodes.size());
    p.m = static_cast<int>(g.edges.size());
    std::map<int, int> slot_to_idx;
    for (int i = 0; i < p.n; ++i) slot_to_idx[g.nodes[i].slot] = i;
    for (const auto& e : g.edges)
        p.edge_pred[{slot_to_idx.at(e.subject_slot), slot_to_idx.at(e.object_slot)}] = e.predicate;
    return p;
}

double node_cost(const ObjectNode& a, const ObjectNode& b, const GedCosts& c) {
    if (a.category != b.category) return c.node_sub;
    if (a.attribute != b.attribute) return 0.5 * c.node_sub;
    return 0.0;
}

void check_costs(const GedCosts& c) {
    if (c.node_sub <= 0 || c.node_indel <= 0 || c.edge_sub <= 0 || c.edge_indel <= 0)
        throw ConfigError("ged: all edit costs must be positive");
}

// Full edit cost induced by a node mapping phi: g1 index -> g2 index or
// kDeleted. Unmapped g2 nodes are insertions.
double induced_cost(const Prepared& a, const Prepared& b, const std::vector<int>& phi,
                    const GedCosts& c) {
    double cost = 0.0;
    std::vector<bool> used(b.n, false);
    for (int i = 0; i < a.n; ++i) {
        if (phi[i] == kDeleted) {
            cost += c.node_indel;
        } else {
            used[phi[i]] = true;
            cost += node_cost(a.nodes[i], b.nodes[phi[i]], c);
        }
    }
    for (int j = 0; j < b.n; ++j)
        if (!used[j]) cost += c.node_indel;

    // edges of g1 under the mapping
    for (const auto& [pair, pred] : a.edge_pred) {
        const int u = phi[pair.first];
        const int v = phi[pair.second];
        if (u == kDeleted || v == kDeleted) {
            cost += c.edge_indel;
            continue;
        }
        auto it = b.edge_pred.find({u, v});
        if (it == b.edge_pred.end())
            cost += c.edge_indel;
        else if (it->second != pred)
            cost += c.edge_sub;
    }
    // g2 edges with no counterpart are insertions
    std::vector<int> inv(b.n, kDeleted);
    for (int i = 0; i < a.n; ++i)
        if (phi[i] != kDeleted) inv[phi[i]] = i;
    for (const auto& [pair, pred] : b.edge_pred) {
        (void)pred;
        const int i = inv[pair.first];
        const int j = inv[pair.second];
        if (i == kDeleted || j == kDeleted || !a.edge_pred.count({i, j})) cost += c.edge_indel;
    }
    return cost;
}

double normalize(double raw, const OarGraph& g1, const OarGraph& g2) {
    const double s1 = static_cast<double>(g1.nodes.size() + g1.edges.size());
    const double s2 = static_cast<double>(g2.nodes.size() + g2.edges.size());
    return raw / std::max({1.0, s1, s2});
}

// ---- exact search -----------------------------------------------------

struct SearchState {
    double f = 0.0;
    double g = 0.0;
    int depth = 0;          // next g1 node to assign
    uint32_t used_mask = 0;  // assigned g2 nodes
    std::vector<int> phi;
};

struct StateOrder {
    bool operator()(const SearchState& a, const SearchState& b) const { return a.f > b.f; }
};

// Incremental edge cost of assigning g1 node `i` (to `j` or kDeleted), looking
// only at edges whose other endpoint is already assigned; each edge between
// assigned nodes is charged exactly once, when its later endpoint lands.
double assign_edge_cost(const Prepared& a, const Prepared& b, const std::vector<int>& phi, int i,
                        int j, const GedCosts& c) {
    double cost = 0.0;
    for (int u = 0; u < i; ++u) {
        for (int dir = 0; dir < 2; ++dir) {
            const auto key1 = dir == 0 ? std::pair{u, i} : std::pair{i, u};
            const auto it1 = a.edge_pred.find(key1);
            bool has2 = false;
            int pred2 = 0;
            if (j != kDeleted && phi[u] != kDeleted) {
                const auto key2 = dir == 0 ? std::pair{phi[u], j} : std::pair{j, phi[u]};
                const auto it2 = b.edge_pred.find(key2);
                if (it2 != b.edge_pred.end()) {
                    has2 = true;
                    pred2 = it2->second;
                }
            }
            if (it1 != a.edge_pred.end() && has2)
                cost += it1->second == pred2 ? 0.0 : c.edge_sub;
            else if (it1 != a.edge_pred.end() || has2)
                cost += c.edge_indel;
        }
    }
    return cost;
}

// Closing cost once every g1 node is assigned: unmatched g2 nodes and their
// untouched edges.
double closure_cost(const Prepared& a, const Prepared& b, const std::vector<int>& phi,
                    const GedCosts& c) {
    double cost = 0.0;
    std::vector<int> inv(b.n, kDeleted);
    for (int i = 0; i < a.n; ++i)
        if (phi[i] != kDeleted) inv[phi[i]] = i;
    for (int j = 0; j < b.n; ++j)
        if (inv[j] == kDeleted) cost += c.node_indel;
    for (const auto& [pair, pred] : b.edge_pred) {
        (void)pred;
        if (inv[pair.first] == kDeleted || inv[pair.second] == kDeleted) cost += c.edge_indel;
        // edges between two matched g2 nodes were charged during assignment
    }
    return cost;
}

double heuristic(const Prepared& a, const Prepared& b, int depth, uint32_t used_mask,
                 const GedCosts& c) {
    const int r1 = a.n - depth;
    const int r2 = b.n - std::popcount(used_mask);
    return std::abs(r1 - r2) * c.node_indel;
}

double exact_raw(const Prepared& a, const Prepared& b, const GedCosts& c) {
    std::priority_queue<SearchState, std::vector<SearchState>, StateOrder> open;
    SearchState root;
    root.phi.reserve(a.n);
    root.f = heuristic(a, b, 0, 0, c);
    open.push(root);
    double best = kInf;
    while (!open.empty()) {
        SearchState s = open.top();
        open.pop();
        if (s.f >= best) break;  // admissible heuristic: done
        if (s.depth == a.n) {
            const double total = s.g + closure_cost(a, b, s.phi, c);
            best = std::min(best, total);
            continue;
        }
        const int i = s.depth;
        for (int j = kDeleted; j < b.n; ++j) {
            if (j != kDeleted && (s.used_mask & (1u << j))) continue;
            SearchState next = s;
            next.depth = i + 1;
            next.phi.push_back(j);
            if (j != kDeleted) {
                next.used_mask |= 1u << j;
                next.g += node_cost(a.nodes[i], b.nodes[j], c);
            } else {
                next.g += c.node_indel;
            }
            next.g += assign_edge_cost(a, b, next.phi, i, j, c);
            next.f = next.g + heuristic(a, b, next.depth, next.used_mask, c);
            if (next.f < best) open.push(std::move(next));
        }
    }
    return best;
}

// ---- assignment upper bound -------------------------------------------

// Hungarian algorithm (Jonker-Volgenant style potentials), square cost matrix.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, n), way(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        p[n] = i;
        int j0 = n;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = n;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0][j] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != n);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 0; j < n; ++j)
        if (p[j] != n) row_to_col[p[j]] = j;
    return row_to_col;
}

// Local structure term: how far apart the out/in predicate multisets of the
// two nodes are, at half edge cost (each edge is seen from both endpoints).
double local_edge_term(const Prepared& g, int idx, const Prepared& h, int jdx,
                       const GedCosts& c) {
    auto collect = [](const Prepared& p, int node, bool out) {
        std::vector<int> preds;
        for (const auto& [pair, pred] : p.edge_pred)
            if ((out ? pair.first : pair.second) == node) preds.push_back(pred);
        std::sort(preds.begin(), preds.end());
        return preds;
    };
    double term = 0.0;
    for (int dir = 0; dir < 2; ++dir) {
        const auto pa = collect(g, idx, dir == 0);
        const auto pb = collect(h, jdx, dir == 0);
        std::vector<int> common;
        std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(),
                              std::back_inserter(common));
        const size_t unmatched = pa.size() + pb.size() - 2 * common.size();
        term += 0.5 * c.edge_indel * static_cast<double>(unmatched);
    }
    return term;
}

double node_degree_cost(const Prepared& g, int idx, const GedCosts& c) {
    double deg = 0.0;
    for (const auto& [pair, pred] : g.edge_pred) {
        (void)pred;
        if (pair.first == idx || pair.second == idx) deg += 1.0;
    }
    return 0.5 * c.edge_indel * deg;
}

std::vector<int> assignment_mapping(const Prepared& a, const Prepared& b, const GedCosts& c) {
    const int n1 = a.n;
    const int n2 = b.n;
    const int n = n1 + n2;
    if (n == 0) return {};
    // finite sentinel keeps the potential updates NaN-free
    const double kBig = 1e9;
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            cost[i][j] = node_cost(a.nodes[i], b.nodes[j], c) + local_edge_term(a, i, b, j, c);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
            cost[i][n2 + j] = i == j ? c.node_indel + node_degree_cost(a, i, c) : kBig;
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j)
            cost[n1 + i][j] = i == j ? c.node_indel + node_degree_cost(b, i, c) : kBig;
    // lower-right block: dummy-to-dummy, zero cost
    const auto row_to_col = hungarian(cost);
    std::vector<int> phi(n1, kDeleted);
    for (int i = 0; i < n1; ++i)
        if (row_to_col[i] < n2) phi[i] = row_to_col[i];
    return phi;
}

// Greedy 2-opt on the mapping: try single reassignments and pairwise swaps as
// long as the induced cost improves. Keeps the result an upper bound.
void refine_mapping(const Prepared& a, const Prepared& b, std::vector<int>& phi,
                    const GedCosts& c) {
    double best = induced_cost(a, b, phi, c);
    bool improved = true;
    while (improved) {
        improved = false;
        std::vector<bool> used(b.n, false);
        for (int x : phi)
            if (x != kDeleted) used[x] = true;
        // reassign one g1 node to any free g2 node or deletion
        for (int i = 0; i < a.n; ++i) {
            for (int j = kDeleted; j < b.n; ++j) {
                if (j == phi[i]) continue;
                if (j != kDeleted && used[j]) continue;
                const int old = phi[i];
                phi[i] = j;
                const double cost = induced_cost(a, b, phi, c);
                if (cost + 1e-12 < best) {
                    best = cost;
                    improved = true;
                    if (old != kDeleted) used[old] = false;
                    if (j != kDeleted) used[j] = true;
                } else {
                    phi[i] = old;
                }
            }
        }
        // swap the images of two g1 nodes
        for (int i = 0; i < a.n && !improved; ++i) {
            for (int k = i + 1; k < a.n; ++k) {
                std::swap(phi[i], phi[k]);
                const double cost = induced_cost(a, b, phi, c);
                if (cost + 1e-12 < best) {
                    best = cost;
                    improved = true;
                    break;
                }
                std::swap(phi[i], phi[k]);
            }
        }
    }
}

}  // namespace

GedResult ged_exact(const OarGraph& g1, const OarGraph& g2, const GedCosts& costs) {
    check_costs(costs);
    const Prepared a = prepare(g1);
    const Prepared b = prepare(g2);
    GedResult r;
    r.raw = exact_raw(a, b, costs);
    r.normalized = normalize(r.raw, g1, g2);
    r.approximate = false;
    return r;
}

GedResult ged_approximate(const OarGraph& g1, const OarGraph& g2, const GedCosts& costs) {
    check_costs(costs);
    const Prepared a = prepare(g1);
    const Prepared b = prepare(g2);
    std::vector<int> phi = assignment_mapping(a, b, costs);
    if (a.n + b.n <= 20) refine_mapping(a, b, phi, costs);
    GedResult r;
    r.raw = induced_cost(a, b, phi, costs);
    r.normalized = normalize(r.raw, g1, g2);
    r.approximate = true;
    return r;
}

GedResult ged(const OarGraph& g1, const OarGraph& g2, const GedCosts& costs) {
    if (g1.nodes.size() + g2.nodes.size() <= 12) return ged_exact(g1, g2, costs);
    return ged_approximate(g1, g2, costs);
}

}  // namespace oarlink
