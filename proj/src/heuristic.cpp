#include "tdsynth/heuristic.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_set>
#include <utility>

namespace tdsynth {

namespace {

std::mutex vn_mutex;
std::map<int, GenSet>& vn_store() {
    static std::map<int, GenSet> store;
    return store;
}

}  // namespace

const GenSet& vn_cached(int n) {
    std::lock_guard<std::mutex> lk(vn_mutex);
    auto& store = vn_store();
    auto it = store.find(n);
    if (it == store.end()) it = store.emplace(n, build_vn(n)).first;
    return it->second;  // map nodes are stable; safe to read after unlock
}

void prime_vn_cache(GenSet g) {
    if (g.n < 1) throw ValidationError("prime_vn_cache: empty generating set");
    std::lock_guard<std::mutex> lk(vn_mutex);
    vn_store().emplace(g.n, std::move(g));  // no-op if already cached: V_n is canonical per n
}

namespace {

/** <V>^-1 * c: the inverse block applies every unit with the flag flipped. */
ChannelMatrix inv_block_apply(const Block& b, const ChannelMatrix& c) {
    ChannelMatrix r = c;
    for (const auto& u : b.units) rp_apply_left_inplace(RpUnit{u.pauli, !u.dagger}, r);
    return r;
}

struct ChildStats {
    int sde = 0;
    int ham = 0;
};

/** One fused scan for the two pruning keys. */
ChildStats stats_of(const ChannelMatrix& c) {
    ChildStats s;
    for (int r = 0; r < c.dim(); ++r)
        for (int col = 0; col < c.dim(); ++col) {
            const DyadicRootTwo& v = c.at(r, col);
            if (v.is_zero()) continue;
            ++s.ham;
            s.sde = std::max(s.sde, v.sde());
        }
    return s;
}

/** Exact serialization, the within-hypernode dedup key. */
std::string channel_key(const ChannelMatrix& c) {
    std::string s;
    s.reserve(static_cast<std::size_t>(c.dim()) * c.dim() * 6);
    for (int r = 0; r < c.dim(); ++r)
        for (int col = 0; col < c.dim(); ++col) {
            const DyadicRootTwo& v = c.at(r, col);
            s += std::to_string(v.a());
            s += ',';
            s += std::to_string(v.b());
            s += ',';
            s += std::to_string(v.k());
            s += ';';
        }
    return s;
}

/** Stored channel, or the remainder recomputed from the path. */
ChannelMatrix materialize(const ChannelMatrix& root, const SearchNode& node) {
    if (node.channel.n() != 0) return node.channel;
    ChannelMatrix c = root;
    for (const auto& b : node.path) c = inv_block_apply(b, c);
    return c;
}

DeltaHam delta_of(int child_ham, int parent_ham) {
    if (child_ham < parent_ham) return DeltaHam::Dec;
    if (child_ham > parent_ham) return DeltaHam::Inc;
    return DeltaHam::Same;
}

using ClassKey = std::tuple<int, int, int>;  // (path_tcount, sde, delta)

ClassKey key_of(int p, int sde, DeltaHam d) { return {p, sde, static_cast<int>(d)}; }

bool feasible_sde(int s, int i, int dprime, int n, const PrunePolicy& policy) {
    if (policy.feasibility == Feasibility::Prose) return s <= n * (dprime - i);
    return s <= dprime - i - 1;
}

/** Splits [0, total) into at most `threads` contiguous ranges. */
std::vector<std::pair<std::size_t, std::size_t>> split_ranges(std::size_t total, int threads) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (total == 0) return out;
    std::size_t nt = std::max(1, threads);
    nt = std::min<std::size_t>(nt, total);
    std::size_t base = total / nt, rem = total % nt, at = 0;
    for (std::size_t w = 0; w < nt; ++w) {
        std::size_t len = base + (w < rem ? 1 : 0);
        out.push_back({at, at + len});
        at += len;
    }
    return out;
}

/** Per-child keys from the classify pass; sde 0 marks an emitted terminal. */
struct ChildRec {
    std::int16_t p = 0;
    std::int16_t ham = 0;
    std::int8_t sde = 0;
    std::int8_t delta = 0;
};

}  // namespace

std::vector<Hypernode> group_hypernodes(std::vector<SearchNode> nodes) {
    std::map<int, Hypernode> by_key;
    for (auto& n : nodes) {
        auto& h = by_key[n.path_tcount];
        h.key = n.path_tcount;
        h.nodes.push_back(std::move(n));
    }
    std::vector<Hypernode> out;
    out.reserve(by_key.size());
    for (auto& [k, h] : by_key) out.push_back(std::move(h));
    return out;
}

ClassifiedChildren classify_children(const std::vector<SearchNode>& parents, const GenSet& gen) {
    std::map<ClassKey, std::vector<SearchNode>> buckets;
    const auto blocks = gen.all();
    for (const auto& parent : parents) {
        if (parent.channel.n() == 0)
            throw ValidationError("classify_children: parent channel missing");
        for (const auto& b : blocks) {
            ChannelMatrix cc = inv_block_apply(b, parent.channel);
            ChildStats st = stats_of(cc);
            DeltaHam d = delta_of(st.ham, parent.ham);
            int p = parent.path_tcount + b.tcount();
            std::vector<Block> path = parent.path;
            path.push_back(b);
            buckets[key_of(p, st.sde, d)].push_back(
                SearchNode{std::move(cc), std::move(path), st.sde, st.ham, p});
        }
    }
    ClassifiedChildren out;
    for (auto& [k, members] : buckets) {
        out.classes.push_back(PruneClass{std::get<1>(k),
                                         static_cast<DeltaHam>(std::get<2>(k)),
                                         std::get<0>(k), members.size()});
        out.members.push_back(std::move(members));
    }
    return out;
}

std::vector<std::size_t> select_classes(const std::vector<PruneClass>& classes, int i,
                                        int dprime, int n, const PrunePolicy& policy) {
    std::map<int, std::vector<std::size_t>> by_p;
    for (std::size_t idx = 0; idx < classes.size(); ++idx)
        if (feasible_sde(classes[idx].sde, i, dprime, n, policy))
            by_p[classes[idx].path_tcount].push_back(idx);
    auto better = [&](std::size_t x, std::size_t y) {
        const PruneClass& a = classes[x];
        const PruneClass& b = classes[y];
        if (a.count != b.count) return a.count < b.count;
        if (a.sde != b.sde) return a.sde < b.sde;
        return a.delta_ham < b.delta_ham;
    };
    std::vector<std::size_t> selected;
    for (auto& [p, idxs] : by_p) {
        std::sort(idxs.begin(), idxs.end(), better);
        if (policy.class_budget == 0) {
            selected.push_back(idxs.front());
        } else {
            std::size_t used = 0;
            for (std::size_t idx : idxs) {
                if (used + classes[idx].count > policy.class_budget) break;
                used += classes[idx].count;
                selected.push_back(idx);
            }
        }
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

std::vector<Decomposition> procedure_a(const ChannelMatrix& a, int dprime,
                                       const PrunePolicy& policy, SearchStats* stats) {
    const int n = a.n();
    if (n < 1) throw ValidationError("procedure_a: empty channel");
    if (!a.is_orthogonal()) throw ValidationError("procedure_a: channel is not orthogonal");
    if (dprime < 1) throw ValidationError("procedure_a: depth budget must be >= 1");

    std::vector<Decomposition> emitted;
    if (a.sde() == 0) {
        emitted.push_back(Decomposition{n, {}, channel_to_tableau(a), 0});
        return emitted;
    }

    const GenSet& gen = vn_cached(n);
    const std::vector<Block> blocks = gen.all();
    const std::size_t nb = blocks.size();
    const int threads = std::max(1, policy.threads);

    std::vector<SearchNode> cur;
    cur.push_back(SearchNode{a, {}, a.sde(), hamming_weight(a), 0});

    for (int i = 1; i <= dprime; ++i) {
        // Classify pass: every child's keys, terminal emissions, no channels kept.
        struct Hit {
            std::size_t order;
            Decomposition dec;
        };
        std::vector<ChildRec> recs(cur.size() * nb);
        auto ranges = split_ranges(cur.size(), threads);
        std::vector<std::map<ClassKey, std::size_t>> tallies(ranges.size());
        std::vector<std::vector<Hit>> hit_lists(ranges.size());
        auto classify_worker = [&](std::size_t w) {
            for (std::size_t pi = ranges[w].first; pi < ranges[w].second; ++pi) {
                const SearchNode& parent = cur[pi];
                ChannelMatrix pc = materialize(a, parent);
                for (std::size_t bi = 0; bi < nb; ++bi) {
                    ChannelMatrix cc = inv_block_apply(blocks[bi], pc);
                    ChildStats st = stats_of(cc);
                    int p = parent.path_tcount + blocks[bi].tcount();
                    if (st.sde == 0) {
                        std::vector<Block> path = parent.path;
                        path.push_back(blocks[bi]);
                        hit_lists[w].push_back(
                            Hit{pi * nb + bi,
                                Decomposition{n, std::move(path), channel_to_tableau(cc), i}});
                        continue;  // recs entry stays sde 0: skipped downstream
                    }
                    DeltaHam d = delta_of(st.ham, parent.ham);
                    recs[pi * nb + bi] =
                        ChildRec{static_cast<std::int16_t>(p), static_cast<std::int16_t>(st.ham),
                                 static_cast<std::int8_t>(st.sde), static_cast<std::int8_t>(d)};
                    ++tallies[w][key_of(p, st.sde, d)];
                }
            }
        };
        if (ranges.size() <= 1) {
            if (!ranges.empty()) classify_worker(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < ranges.size(); ++w) pool.emplace_back(classify_worker, w);
            for (auto& th : pool) th.join();
        }
        std::map<ClassKey, std::size_t> tally;
        std::vector<Hit> hits;
        for (std::size_t w = 0; w < ranges.size(); ++w) {
            for (auto& [k, c] : tallies[w]) tally[k] += c;
            for (auto& h : hit_lists[w]) hits.push_back(std::move(h));
        }
        if (stats) stats->children_seen += cur.size() * nb;
        std::sort(hits.begin(), hits.end(),
                  [](const Hit& x, const Hit& y) { return x.order < y.order; });
        for (auto& h : hits) emitted.push_back(std::move(h.dec));

        if (i == dprime) break;  // no levels left: nothing non-terminal is feasible

        // Select the classes to keep alive.
        std::vector<PruneClass> classes;
        classes.reserve(tally.size());
        for (const auto& [k, c] : tally)
            classes.push_back(PruneClass{std::get<1>(k), static_cast<DeltaHam>(std::get<2>(k)),
                                         std::get<0>(k), c});
        std::set<ClassKey> keep;
        for (std::size_t idx : select_classes(classes, i, dprime, n, policy))
            keep.insert(key_of(classes[idx].path_tcount, classes[idx].sde,
                               classes[idx].delta_ham));
        if (keep.empty()) break;

        // Keep pass: rematerialize exactly the recorded children of kept classes.
        struct Cand {
            std::size_t order;
            SearchNode node;
            std::string key;
        };
        auto rec_kept = [&](const ChildRec& rc) {
            return rc.sde != 0 &&
                   keep.count(key_of(rc.p, rc.sde, static_cast<DeltaHam>(rc.delta))) != 0;
        };
        std::vector<std::vector<Cand>> cand_lists(ranges.size());
        auto keep_worker = [&](std::size_t w) {
            for (std::size_t pi = ranges[w].first; pi < ranges[w].second; ++pi) {
                const SearchNode& parent = cur[pi];
                ChannelMatrix pc;
                bool have_pc = false;
                for (std::size_t bi = 0; bi < nb; ++bi) {
                    const ChildRec& rc = recs[pi * nb + bi];
                    if (!rec_kept(rc)) continue;
                    if (!have_pc) {
                        pc = materialize(a, parent);
                        have_pc = true;
                    }
                    ChannelMatrix cc = inv_block_apply(blocks[bi], pc);
                    std::vector<Block> path = parent.path;
                    path.push_back(blocks[bi]);
                    std::string dk = policy.dedup ? channel_key(cc) : std::string();
                    SearchNode node{policy.recompute ? ChannelMatrix() : std::move(cc),
                                    std::move(path), rc.sde, rc.ham, rc.p};
                    cand_lists[w].push_back(
                        Cand{pi * nb + bi, std::move(node), std::move(dk)});
                }
            }
        };
        if (ranges.size() <= 1) {
            if (!ranges.empty()) keep_worker(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < ranges.size(); ++w) pool.emplace_back(keep_worker, w);
            for (auto& th : pool) th.join();
        }
        std::vector<SearchNode> next;
        std::map<int, std::unordered_set<std::string>> seen_by_p;
        for (auto& lst : cand_lists) {
            for (auto& cand : lst) {
                if (policy.dedup && !seen_by_p[cand.node.path_tcount].insert(cand.key).second)
                    continue;
                if (policy.max_nodes && next.size() >= policy.max_nodes)
                    throw ResourceError("procedure_a: generation exceeds the node cap");
                next.push_back(std::move(cand.node));
            }
        }
        if (stats) {
            stats->nodes_per_level.push_back(next.size());
            stats->max_nodes = std::max(stats->max_nodes, next.size());
        }
        if (next.empty()) break;
        cur = std::move(next);
    }
    if (stats) stats->emitted += emitted.size();
    return emitted;
}

std::pair<int, Decomposition> min_tdepth(const ChannelMatrix& a, const PrunePolicy& policy,
                                         SearchStats* stats) {
    const int n = a.n();
    if (n < 1) throw ValidationError("min_tdepth: empty channel");
    if (!a.is_orthogonal()) throw ValidationError("min_tdepth: channel is not orthogonal");
    if (is_clifford_channel(a))
        return {0, Decomposition{n, {}, channel_to_tableau(a), 0}};

    const int lower = (a.sde() + n - 1) / n;
    int dp = std::max({1, lower, policy.budget_start});
    const int cap = policy.max_depth > 0 ? policy.max_depth : 64;
    for (; dp <= cap; ++dp) {
        if (stats) {
            stats->final_budget = dp;
            stats->nodes_per_level.clear();
        }
        auto found = procedure_a(a, dp, policy, stats);
        if (found.empty()) continue;
        const Decomposition* best = nullptr;
        Decomposition merged_best;
        for (const auto& d : found) {
            Decomposition m = merge_pass(d);
            if (!best || m.blocks.size() < merged_best.blocks.size()) {
                merged_best = std::move(m);
                best = &merged_best;
            }
        }
        if (!decomposition_matches(merged_best, a))
            throw Error("min_tdepth: decomposition failed exact verification");
        return {static_cast<int>(merged_best.blocks.size()), merged_best};
    }
    throw ResourceError("min_tdepth: no decomposition within the depth cap");
}

Decomposition merge_pass(const Decomposition& dec) {
    Decomposition out = dec;
    out.blocks.clear();
    for (const auto& b : dec.blocks) {
        if (!out.blocks.empty() && can_merge(out.blocks.back(), b))
            out.blocks.back() = merge_blocks(out.blocks.back(), b);
        else
            out.blocks.push_back(b);
    }
    out.t_depth_claimed = static_cast<int>(out.blocks.size());
    if (decomposition_channel(out) != decomposition_channel(dec))
        throw Error("merge_pass: product channel changed");
    return out;
}

}  // namespace tdsynth
