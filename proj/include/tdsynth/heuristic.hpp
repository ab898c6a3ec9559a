#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tdsynth/decomposition.hpp"

namespace tdsynth {

/**
 * One live branch of the depth-first deepening search.  path holds the edge
 * blocks un-inverted, leftmost first; channel is the remainder
 * <V_k>^-1 ... <V_1>^-1 <A> (empty matrix when the policy recomputes from
 * the path instead of caching).  sde, ham and path_tcount cache the pruning
 * observables.
 */
struct SearchNode {
    ChannelMatrix channel;
    std::vector<Block> path;
    int sde = 0;
    int ham = 0;
    int path_tcount = 0;
};

/** Nodes of one generation sharing a path T-count. */
struct Hypernode {
    int key = 0;
    std::vector<SearchNode> nodes;
};

/** Groups by path T-count, ascending key, node order preserved. */
std::vector<Hypernode> group_hypernodes(std::vector<SearchNode> nodes);

/** Process-wide memo of build_vn(n); built on first use. */
const GenSet& vn_cached(int n);

/** Installs a prebuilt (e.g. disk-loaded) set into the memo; no-op if present. */
void prime_vn_cache(GenSet g);

enum class DeltaHam { Dec, Same, Inc };

/** One child class of a generation: all children sharing the tuple. */
struct PruneClass {
    int sde = 0;
    DeltaHam delta_ham = DeltaHam::Same;
    int path_tcount = 0;
    std::size_t count = 0;
};

/**
 * Feasibility bound on a child's sde s with i of d' levels spent:
 * Prose requires s <= n*(d'-i) (each block can lower sde by at most n),
 * Pseudocode requires the stricter s <= d'-i-1.
 */
enum class Feasibility { Prose, Pseudocode };

struct PrunePolicy {
    Feasibility feasibility = Feasibility::Prose;
    std::size_t class_budget = 0;  // 0: keep only the min-count class per path T-count
    bool dedup = true;             // drop identical channels within a hypernode
    std::size_t max_nodes = 0;     // cap on one generation's kept nodes, 0 = unlimited
    int max_depth = 0;             // deepening cap for min_tdepth, 0 = default (64)
    int budget_start = 0;          // starting depth budget, 0 = the sde lower bound
    bool recompute = false;        // trade time for memory: derive channels from paths
    int threads = 1;
};

struct SearchStats {
    std::vector<std::size_t> nodes_per_level;  // kept nodes after each selection
    std::size_t max_nodes = 0;
    std::size_t children_seen = 0;
    std::size_t emitted = 0;
    int final_budget = 0;
};

/** Full child partition of a parent generation, for small-scale inspection. */
struct ClassifiedChildren {
    std::vector<PruneClass> classes;               // ascending (path_tcount, sde, delta)
    std::vector<std::vector<SearchNode>> members;  // parallel to classes
};

/**
 * Classifies every parent x inverse-block child by (path T-count, sde,
 * Hamming-weight change).  No dedup, no emission filtering: the class counts
 * sum to |parents| * |gen|.
 */
ClassifiedChildren classify_children(const std::vector<SearchNode>& parents, const GenSet& gen);

/**
 * For each path T-count present: among classes passing the feasibility
 * bound, keep the one with minimum count (ties: lower sde, then
 * dec < same < inc), or with class_budget > 0 the smallest classes whose
 * cumulative count fits the budget.  Returns indices into classes,
 * ascending; a path T-count with no feasible class selects nothing.
 */
std::vector<std::size_t> select_classes(const std::vector<PruneClass>& classes, int i,
                                        int dprime, int n, const PrunePolicy& policy);

/**
 * One bounded run of the pruned expansion: grows the hypernode tree level by
 * level up to d' blocks, emits a verified-shape decomposition whenever a
 * child's remainder reaches sde 0, and keeps only selected classes alive.
 * Children with sde 0 are emitted, never expanded.  A Clifford input yields
 * the empty-path decomposition.  Returned decompositions re-multiply to a
 * exactly; pruning can only lose solutions, never invent them.
 */
std::vector<Decomposition> procedure_a(const ChannelMatrix& a, int dprime,
                                       const PrunePolicy& policy = {},
                                       SearchStats* stats = nullptr);

/**
 * Deepening loop: starts at the sde lower bound ceil(sde/n), raises the
 * budget until procedure_a returns candidates, merge-passes each and returns
 * the smallest block count with its decomposition (exactness re-verified).
 * Throws ResourceError if the cap is reached with nothing found.
 */
std::pair<int, Decomposition> min_tdepth(const ChannelMatrix& a, const PrunePolicy& policy = {},
                                         SearchStats* stats = nullptr);

/**
 * Greedy left-to-right fusion of adjacent mergeable blocks; the product
 * channel is asserted unchanged and the block count never grows.
 */
Decomposition merge_pass(const Decomposition& dec);

}  // namespace tdsynth
