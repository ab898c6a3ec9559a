#include "tdsynth/mitm.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "tdsynth/circuit.hpp"
#include "tdsynth/coset.hpp"

namespace tdsynth {

const char* const kMitmDbFormat = "tdsynth-mitmdb-v1";

std::vector<GenLabel> vn_dprime_generators(int n) {
    if (n < 1) throw ValidationError("vn_dprime_generators: n must be >= 1");
    if (n > 3) throw ResourceError("vn_dprime_generators: practical for n <= 3 only");
    std::map<std::string, GenLabel> by_digest;
    each_valid_pauli_subset(n, [&](const std::vector<PauliIndex>& paulis) {
        const int sz = static_cast<int>(paulis.size());
        for (int flags = 0; flags < (1 << sz); ++flags) {
            std::vector<RpUnit> units;
            units.reserve(sz);
            for (int i = 0; i < sz; ++i)
                units.push_back(RpUnit{paulis[i], ((flags >> i) & 1) != 0});
            Block b = make_block(n, std::move(units));
            ChannelMatrix lab = coset_label(block_channel(b));
            std::string dig = label_digest(lab);
            by_digest.emplace(std::move(dig), GenLabel{std::move(lab), std::move(b)});
        }
    });
    std::vector<GenLabel> out;
    out.reserve(by_digest.size());
    for (auto& [dig, gl] : by_digest) out.push_back(std::move(gl));
    return out;
}

SearchDatabase SearchDatabase::fresh(int n) {
    SearchDatabase db;
    db.n = n;
    ChannelMatrix id = ChannelMatrix::identity(n);
    std::string dig = coset_digest(id);
    db.levels.push_back({DbEntry{std::move(dig), std::move(id), -1, -1}});
    return db;
}

std::optional<std::pair<int, int>> SearchDatabase::find(const std::string& digest,
                                                        int max_level) const {
    const int top = std::min<int>(max_level, static_cast<int>(levels.size()) - 1);
    for (int j = 0; j <= top; ++j) {
        const auto& lv = levels[j];
        auto it = std::lower_bound(lv.begin(), lv.end(), digest,
                                   [](const DbEntry& e, const std::string& d) {
                                       return e.digest < d;
                                   });
        if (it != lv.end() && it->digest == digest)
            return std::make_pair(j, static_cast<int>(it - lv.begin()));
    }
    return std::nullopt;
}

void mitm_level_extend(SearchDatabase& db, const std::vector<GenLabel>& gen,
                       std::size_t mem_cap) {
    if (db.levels.empty()) throw ValidationError("mitm_level_extend: uninitialized database");
    if (gen.empty()) throw ValidationError("mitm_level_extend: empty generator alphabet");
    std::vector<ChannelMatrix> gen_reps;
    gen_reps.reserve(gen.size());
    for (const auto& g : gen) gen_reps.push_back(block_channel(g.witness));
    const auto& prev = db.levels.back();
    std::vector<DbEntry> next;
    std::unordered_set<std::string> seen;
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(prev.size()); ++p) {
        for (std::int32_t g = 0; g < static_cast<std::int32_t>(gen.size()); ++g) {
            ChannelMatrix rep = channel_mul(prev[p].rep, gen_reps[g]);
            std::string dig = coset_digest(rep);
            if (!seen.insert(dig).second) continue;
            if (mem_cap && next.size() >= mem_cap)
                throw ResourceError("mitm_level_extend: level exceeds memory cap");
            next.push_back(DbEntry{std::move(dig), std::move(rep), p, g});
        }
    }
    std::sort(next.begin(), next.end(),
              [](const DbEntry& x, const DbEntry& y) { return x.digest < y.digest; });
    db.levels.push_back(std::move(next));
}

namespace {

/**
 * Emits the witness blocks of levels[level][idx] into the fold, left to
 * right.  Their channel product is exactly the stored representative.
 */
void expand_into(FactorFold& fold, const SearchDatabase& db, const std::vector<GenLabel>& gens,
                 int level, int idx) {
    if (level == 0) return;
    const DbEntry& e = db.levels[level][idx];
    expand_into(fold, db, gens, level - 1, e.parent);
    fold.push_block(gens[e.gen].witness);
}

/** Prefix draws (level, index) in left-to-right order, final hit, relator. */
struct ProbePath {
    std::vector<std::pair<int, int>> draws;
    int hit_level = -1;
    int hit_index = -1;
    CliffordTableau rel;
};

/**
 * True iff u factors into at most t blocks times a Clifford using prefixes
 * from the database window (levels 1..m for draws, direct hits anywhere at
 * or below min(t, m)).  Deterministic: lowest level first, digest order,
 * first success wins.
 */
bool probe(const ChannelMatrix& u, int t, const SearchDatabase& db, int m, ProbePath& out) {
    const int n = u.n();
    if (u.sde() > n * t) return false;
    std::string dig = coset_digest(u);
    if (auto hit = db.find(dig, std::min(t, m))) {
        const DbEntry& e = db.levels[hit->first][hit->second];
        ChannelMatrix cw;
        if (!same_coset(u, e.rep, &cw)) throw Error("probe: coset digest collision");
        out.rel = channel_to_tableau(cw);
        out.hit_level = hit->first;
        out.hit_index = hit->second;
        return true;
    }
    if (t <= m) return false;
    const int jmax = std::min<int>(m, static_cast<int>(db.levels.size()) - 1);
    for (int j = 1; j <= jmax; ++j) {
        const auto& lv = db.levels[j];
        for (int idx = 0; idx < static_cast<int>(lv.size()); ++idx) {
            ChannelMatrix u_next = channel_mul(channel_inverse(lv[idx].rep), u);
            if (probe(u_next, t - j, db, m, out)) {
                out.draws.insert(out.draws.begin(), {j, idx});
                return true;
            }
        }
    }
    return false;
}

/**
 * Top-level probe with an optional parallel first-draw loop.  Identical
 * result to the serial probe: workers claim draw indices in order and the
 * success with the smallest index wins.
 */
bool probe_top(const ChannelMatrix& u, int t, const SearchDatabase& db, int m, int threads,
               ProbePath& out) {
    const int n = u.n();
    if (u.sde() > n * t) return false;
    std::string dig = coset_digest(u);
    if (auto hit = db.find(dig, std::min(t, m))) {
        const DbEntry& e = db.levels[hit->first][hit->second];
        ChannelMatrix cw;
        if (!same_coset(u, e.rep, &cw)) throw Error("probe: coset digest collision");
        out.rel = channel_to_tableau(cw);
        out.hit_level = hit->first;
        out.hit_index = hit->second;
        return true;
    }
    if (t <= m) return false;
    std::vector<std::pair<int, int>> flat;
    const int jmax = std::min<int>(m, static_cast<int>(db.levels.size()) - 1);
    for (int j = 1; j <= jmax; ++j)
        for (int idx = 0; idx < static_cast<int>(db.levels[j].size()); ++idx)
            flat.push_back({j, idx});

    if (threads <= 1 || flat.size() < 64) {
        for (const auto& [j, idx] : flat) {
            ChannelMatrix u_next = channel_mul(channel_inverse(db.levels[j][idx].rep), u);
            if (probe(u_next, t - j, db, m, out)) {
                out.draws.insert(out.draws.begin(), {j, idx});
                return true;
            }
        }
        return false;
    }

    std::atomic<std::size_t> cursor{0};
    std::atomic<std::size_t> best{SIZE_MAX};
    std::mutex res_mu;
    std::map<std::size_t, ProbePath> results;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= flat.size() || i >= best.load()) return;
            const auto [j, idx] = flat[i];
            ChannelMatrix u_next = channel_mul(channel_inverse(db.levels[j][idx].rep), u);
            ProbePath sub;
            if (probe(u_next, t - j, db, m, sub)) {
                sub.draws.insert(sub.draws.begin(), {j, idx});
                std::size_t cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {
                }
                std::lock_guard<std::mutex> lk(res_mu);
                results.emplace(i, std::move(sub));
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    std::size_t win = best.load();
    if (win == SIZE_MAX) return false;
    out = std::move(results.at(win));
    return true;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

std::optional<Decomposition> tdepth_mitm(const ChannelMatrix& a, const MitmOptions& opt) {
    const int n = a.n();
    if (n < 1) throw ValidationError("tdepth_mitm: empty channel");
    if (!a.is_orthogonal()) throw ValidationError("tdepth_mitm: channel is not orthogonal");
    if (opt.nesting_c < 2) throw ValidationError("tdepth_mitm: nesting parameter must be >= 2");
    if (opt.max_depth < 0) throw ValidationError("tdepth_mitm: max_depth must be >= 0");
    if (is_clifford_channel(a))
        return Decomposition{n, {}, channel_to_tableau(a), 0};
    if (opt.max_depth == 0) return std::nullopt;

    std::vector<GenLabel> local_gens;
    const std::vector<GenLabel>* gens = opt.gens;
    if (!gens) {
        local_gens = vn_dprime_generators(n);
        gens = &local_gens;
    }
    if (gens->empty() || gens->front().label.n() != n)
        throw ValidationError("tdepth_mitm: generator alphabet register size mismatch");

    SearchDatabase local_db;
    SearchDatabase* db = opt.db ? opt.db : &local_db;
    if (db->levels.empty()) *db = SearchDatabase::fresh(n);
    if (db->n != n) throw ValidationError("tdepth_mitm: database register size mismatch");

    const int d = opt.max_depth;
    const int m = (d + opt.nesting_c - 1) / opt.nesting_c;
    const int threads = resolve_threads(opt.threads);
    const int t0 = std::max(1, (a.sde() + n - 1) / n);
    for (int t = t0; t <= d; ++t) {
        const int want = std::min(t, m);
        while (static_cast<int>(db->levels.size()) - 1 < want)
            mitm_level_extend(*db, *gens, opt.mem_cap);
        ProbePath path;
        if (!probe_top(a, t, *db, m, threads, path)) continue;
        FactorFold fold(n);
        for (const auto& [j, idx] : path.draws) expand_into(fold, *db, *gens, j, idx);
        expand_into(fold, *db, *gens, path.hit_level, path.hit_index);
        fold.push_clifford(path.rel);
        Decomposition dec = fold.finish();
        if (static_cast<int>(dec.blocks.size()) != t)
            throw Error("tdepth_mitm: depth accounting mismatch");
        if (!decomposition_matches(dec, a))
            throw Error("tdepth_mitm: decomposition failed exact verification");
        return dec;
    }
    return std::nullopt;
}

namespace {

std::string umat_key(const UMat& u) {
    std::string s;
    s.reserve(static_cast<std::size_t>(u.dim()) * u.dim() * 12);
    for (int r = 0; r < u.dim(); ++r)
        for (int c = 0; c < u.dim(); ++c) {
            const GaussianRootTwo& v = u.at(r, c);
            s += std::to_string(v.a());
            s += ',';
            s += std::to_string(v.b());
            s += ',';
            s += std::to_string(v.c());
            s += ',';
            s += std::to_string(v.d());
            s += ',';
            s += std::to_string(v.k());
            s += ';';
        }
    return s;
}

struct UEntry {
    UMat u;
    int parent = -1;
    int layer = -1;
};

/** BFS frontiers over exact unitaries; where maps key -> lowest (level, idx). */
struct ULevels {
    std::vector<std::vector<UEntry>> levels;
    std::unordered_map<std::string, std::pair<int, int>> where;
};

void ulevel_extend(ULevels& lv, const std::vector<UMat>& layer_set) {
    const int i = static_cast<int>(lv.levels.size());
    const auto& prev = lv.levels[i - 1];
    std::vector<UEntry> next;
    for (int p = 0; p < static_cast<int>(prev.size()); ++p) {
        for (int g = 0; g < static_cast<int>(layer_set.size()); ++g) {
            UMat v = prev[p].u * layer_set[g];
            std::string key = umat_key(v);
            if (lv.where.count(key)) continue;
            lv.where.emplace(std::move(key), std::make_pair(i, static_cast<int>(next.size())));
            next.push_back(UEntry{std::move(v), p, g});
        }
    }
    lv.levels.push_back(std::move(next));
}

/** Layer indices of the product chained into levels[level][idx]. */
std::vector<int> uchain(const ULevels& lv, int level, int idx) {
    std::vector<int> out;
    while (level > 0) {
        const UEntry& e = lv.levels[level][idx];
        out.push_back(e.layer);
        idx = e.parent;
        --level;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool uprobe(const UMat& u, int t, const ULevels& lv, int m, std::vector<int>& out) {
    auto it = lv.where.find(umat_key(u));
    if (it != lv.where.end() && it->second.first <= std::min(t, m)) {
        out = uchain(lv, it->second.first, it->second.second);
        return true;
    }
    if (t <= m) return false;
    const int jmax = std::min<int>(m, static_cast<int>(lv.levels.size()) - 1);
    for (int j = 1; j <= jmax; ++j) {
        const auto& level = lv.levels[j];
        for (int idx = 0; idx < static_cast<int>(level.size()); ++idx) {
            UMat u_next = level[idx].u.dagger() * u;
            std::vector<int> sub;
            if (uprobe(u_next, t - j, lv, m, sub)) {
                out = uchain(lv, j, idx);
                out.insert(out.end(), sub.begin(), sub.end());
                return true;
            }
        }
    }
    return false;
}

}  // namespace

std::optional<LayerSeq> nested_mitm_depth(const UMat& u, const std::vector<UMat>& layer_set,
                                          int d, int c) {
    if (c < 2) throw ValidationError("nested_mitm_depth: nesting parameter must be >= 2");
    if (layer_set.empty()) throw ValidationError("nested_mitm_depth: empty layer set");
    if (d < 0) throw ValidationError("nested_mitm_depth: negative depth bound");
    const int dim = layer_set.front().dim();
    for (const auto& l : layer_set)
        if (l.dim() != dim) throw ValidationError("nested_mitm_depth: layer dimension mismatch");
    if (u.dim() != dim) throw ValidationError("nested_mitm_depth: target dimension mismatch");
    if (!u.is_unitary()) throw ValidationError("nested_mitm_depth: target is not unitary");

    std::unordered_set<std::string> keys;
    for (const auto& l : layer_set) keys.insert(umat_key(l));
    if (!keys.count(umat_key(UMat::identity(dim))))
        throw ValidationError("nested_mitm_depth: layer set must contain the identity");
    for (const auto& l : layer_set)
        if (!keys.count(umat_key(l.dagger())))
            throw ValidationError("nested_mitm_depth: layer set must be closed under inverse");

    ULevels lv;
    lv.levels.push_back({UEntry{UMat::identity(dim), -1, -1}});
    lv.where.emplace(umat_key(UMat::identity(dim)), std::make_pair(0, 0));

    const int m = d == 0 ? 0 : (d + c - 1) / c;
    for (int t = 0; t <= d; ++t) {
        const int want = std::min(t, m);
        while (static_cast<int>(lv.levels.size()) - 1 < want) ulevel_extend(lv, layer_set);
        std::vector<int> indices;
        if (!uprobe(u, t, lv, m, indices)) continue;
        if (static_cast<int>(indices.size()) != t)
            throw Error("nested_mitm_depth: depth accounting mismatch");
        UMat prod = UMat::identity(dim);
        for (int g : indices) prod = prod * layer_set[g];
        if (prod != u) throw Error("nested_mitm_depth: factorization failed exact verification");
        return LayerSeq{t, std::move(indices)};
    }
    return std::nullopt;
}

std::vector<UMat> clifford_t_layer_set(int n) {
    if (n < 1 || n > 2)
        throw ValidationError("clifford_t_layer_set: n must be 1 or 2");
    const GateKind kinds[] = {GateKind::H, GateKind::S, GateKind::Sdg, GateKind::T,
                              GateKind::Tdg};
    std::vector<UMat> singles;
    singles.push_back(UMat::identity(2));
    for (GateKind k : kinds) singles.push_back(gate_matrix(Gate{k, 0, -1}, 1));
    if (n == 1) return singles;

    std::vector<UMat> out;
    std::unordered_set<std::string> seen;
    auto add = [&](UMat v) {
        std::string key = umat_key(v);
        if (seen.insert(key).second) out.push_back(std::move(v));
    };
    for (const auto& a : singles)
        for (const auto& b : singles) add(a.kron(b));
    add(gate_matrix(Gate{GateKind::CNOT, 0, 1}, 2));
    add(gate_matrix(Gate{GateKind::CNOT, 1, 0}, 2));
    return out;
}

void save_database(const SearchDatabase& db, const std::vector<GenLabel>& gen,
                   const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("save_database: cannot open " + path);
    nlohmann::json gd = nlohmann::json::array();
    for (const auto& g : gen) gd.push_back(label_digest(g.label));
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& lv : db.levels) sizes.push_back(lv.size());
    nlohmann::json header = {{"format", kMitmDbFormat},
                             {"n", db.n},
                             {"digest", kLabelDigestAlgo},
                             {"gens", std::move(gd)},
                             {"levels", std::move(sizes)}};
    out << header.dump() << "\n";
    const int dim = 1 << (2 * db.n);
    for (std::size_t l = 0; l < db.levels.size(); ++l) {
        for (const auto& e : db.levels[l]) {
            nlohmann::json m = nlohmann::json::array();
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) {
                    const DyadicRootTwo& v = e.rep.at(r, c);
                    m.push_back(v.a());
                    m.push_back(v.b());
                    m.push_back(v.k());
                }
            nlohmann::json rec = {{"l", l}, {"d", e.digest},   {"p", e.parent},
                                  {"g", e.gen}, {"m", std::move(m)}};
            out << rec.dump() << "\n";
        }
    }
    if (!out) throw Error("save_database: write failed for " + path);
}

SearchDatabase load_database(const std::string& path, int expect_n,
                             const std::vector<GenLabel>& gen) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_database: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("load_database: empty file");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("load_database: bad header: ") + e.what());
    }
    if (header.value("format", "") != kMitmDbFormat)
        throw ParseError("load_database: unsupported format version");
    if (header.value("n", -1) != expect_n)
        throw ParseError("load_database: qubit count mismatch");
    if (header.value("digest", "") != kLabelDigestAlgo)
        throw ParseError("load_database: digest algorithm mismatch");
    const auto& gj = header.at("gens");
    if (gj.size() != gen.size())
        throw ParseError("load_database: generator alphabet size mismatch");
    for (std::size_t i = 0; i < gen.size(); ++i)
        if (gj[i].get<std::string>() != label_digest(gen[i].label))
            throw ParseError("load_database: generator alphabet digest mismatch");
    std::vector<std::size_t> sizes;
    for (const auto& s : header.at("levels")) sizes.push_back(s.get<std::size_t>());
    if (sizes.empty() || sizes[0] != 1)
        throw ParseError("load_database: malformed level table");

    SearchDatabase db;
    db.n = expect_n;
    db.levels.assign(sizes.size(), {});
    const int dim = 1 << (2 * expect_n);
    std::size_t cur_level = 0, in_level = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("load_database: bad record: ") + e.what());
        }
        const std::size_t l = j.at("l").get<std::size_t>();
        while (cur_level < sizes.size() && in_level == sizes[cur_level]) {
            ++cur_level;
            in_level = 0;
        }
        if (l != cur_level || cur_level >= sizes.size())
            throw ParseError("load_database: record out of level order");
        DbEntry e;
        e.digest = j.at("d").get<std::string>();
        e.parent = j.at("p").get<std::int32_t>();
        e.gen = j.at("g").get<std::int32_t>();
        const auto& m = j.at("m");
        if (m.size() != static_cast<std::size_t>(dim) * dim * 3)
            throw ParseError("load_database: label entry count mismatch");
        e.rep = ChannelMatrix(expect_n);
        std::size_t pos = 0;
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                Int a = m[pos].get<Int>();
                Int b = m[pos + 1].get<Int>();
                int k = m[pos + 2].get<int>();
                pos += 3;
                if (k < 0) throw ParseError("load_database: negative denominator exponent");
                e.rep.at(r, c) = DyadicRootTwo(a, b, k);
            }
        if (coset_digest(e.rep) != e.digest)
            throw ParseError("load_database: coset digest mismatch");
        if (!e.rep.is_orthogonal())
            throw ParseError("load_database: representative is not orthogonal");
        if (cur_level == 0) {
            if (e.parent != -1 || e.gen != -1 || e.rep != ChannelMatrix::identity(expect_n))
                throw ParseError("load_database: malformed root entry");
        } else {
            if (e.parent < 0 ||
                e.parent >= static_cast<std::int32_t>(sizes[cur_level - 1]))
                throw ParseError("load_database: parent index out of range");
            if (e.gen < 0 || e.gen >= static_cast<std::int32_t>(gen.size()))
                throw ParseError("load_database: generator index out of range");
            if (!db.levels[cur_level].empty() &&
                db.levels[cur_level].back().digest >= e.digest)
                throw ParseError("load_database: level digests out of order");
        }
        db.levels[cur_level].push_back(std::move(e));
        ++in_level;
    }
    for (std::size_t l = 0; l < sizes.size(); ++l)
        if (db.levels[l].size() != sizes[l])
            throw ParseError("load_database: level size mismatch with header");
    return db;
}

}  // namespace tdsynth
