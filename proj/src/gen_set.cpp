#include "tdsynth/gen_set.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tdsynth/coset.hpp"
#include "tdsynth/tableau.hpp"

namespace tdsynth {

const char* const kGenSetFormat = "tdsynth-genset-v1";

namespace {

SignedPauli unit_pauli(int n, const RpUnit& u) { return pauli_from_index(n, u.pauli); }

/** GF(2) independence of the (x|z) symplectic vectors. */
bool independent(const std::vector<SignedPauli>& ps) {
    std::uint64_t basis[64] = {0};
    for (const auto& p : ps) {
        std::uint64_t v = (static_cast<std::uint64_t>(p.x) << 32) | p.z;
        while (v != 0) {
            int h = 63 - __builtin_clzll(v);
            if (basis[h] == 0) {
                basis[h] = v;
                break;
            }
            v ^= basis[h];
        }
        if (v == 0) return false;
    }
    return true;
}

}  // namespace

bool block_valid(int n, const std::vector<RpUnit>& units) {
    if (n < 1 || units.empty() || static_cast<int>(units.size()) > n) return false;
    const PauliIndex dim = 1u << (2 * n);
    std::vector<SignedPauli> ps;
    ps.reserve(units.size());
    for (const auto& u : units) {
        if (u.pauli == 0 || u.pauli >= dim) return false;
        ps.push_back(unit_pauli(n, u));
    }
    for (size_t i = 0; i < ps.size(); ++i)
        for (size_t j = i + 1; j < ps.size(); ++j) {
            if (ps[i].x == ps[j].x && ps[i].z == ps[j].z) return false;
            if (!pauli_commutes(ps[i], ps[j])) return false;
        }
    return independent(ps);
}

Block make_block(int n, std::vector<RpUnit> units) {
    std::sort(units.begin(), units.end());
    if (!block_valid(n, units)) throw ValidationError("make_block: invalid unit set");
    return Block{n, std::move(units)};
}

std::string block_key(const Block& b) {
    std::string s;
    for (const auto& u : b.units) {
        s += '(';
        s += pauli_str(unit_pauli(b.n, u));
        s += u.dagger ? ",Tdg)" : ",T)";
    }
    return s;
}

std::size_t GenSet::size() const {
    std::size_t t = 0;
    for (const auto& v : by_tcount) t += v.size();
    return t;
}

std::vector<Block> GenSet::all() const {
    std::vector<Block> out;
    out.reserve(size());
    for (const auto& v : by_tcount) out.insert(out.end(), v.begin(), v.end());
    return out;
}

namespace {

// The construction below works with per-qubit letter vectors (0=I,1=X,2=Y,3=Z,
// qubit 0 first) and assembles candidate partner-image tuples for a root Pauli
// P placed at tableau row k.  Each tuple extends to blocks by taking the root
// together with any subset of partners and any T/Tdg flag assignment.
using Letters = std::vector<int>;

PauliIndex letters_index(const Letters& p) {
    PauliIndex idx = 0;
    for (int a : p) idx = idx * 4 + static_cast<PauliIndex>(a);
    return idx;
}

Letters zleaf(int n, int j) {
    Letters p(n, 0);
    p[j] = 3;
    return p;
}

Letters two_site(int n, int u, int a, int j, int b) {
    Letters p(n, 0);
    p[u] = a;
    p[j] = b;
    return p;
}

/** Partner images keyed by row, for root P at row k.  Rows are all != k. */
std::vector<std::map<int, Letters>> tuples_for(int n, const Letters& p, int k) {
    std::vector<int> supp;
    for (int i = 0; i < n; ++i)
        if (p[i] != 0) supp.push_back(i);
    const int w = static_cast<int>(supp.size());
    std::vector<std::map<int, Letters>> out;

    if (p[k] != 0) {
        // Root row inside the support: partners restrict P to single letters.
        std::map<int, Letters> base;
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            if (p[j] != 0) {
                Letters q(n, 0);
                q[j] = p[j];
                base[j] = q;
            } else {
                base[j] = zleaf(n, j);
            }
        }
        out.push_back(base);
        if (w == 1) {
            const int u = k, a = p[u];  // a != Z: Z_k roots are excluded upstream
            for (int b = 1; b <= 3; ++b) {
                std::map<int, Letters> t;
                for (int j = 0; j < n; ++j)
                    if (j != u) t[j] = two_site(n, u, a, j, b);
                out.push_back(t);
            }
            for (int tj = 0; tj < n; ++tj) {
                if (tj == u) continue;
                std::map<int, Letters> t;
                for (int g = 0; g < n; ++g) {
                    if (g == u) continue;
                    t[g] = (g == tj) ? two_site(n, u, a, g, 3) : zleaf(n, g);
                }
                out.push_back(t);
            }
        }
    } else {
        // Root row outside the support: one partner swaps in Z at row k's slot.
        const int s = supp.front();
        std::map<int, Letters> base;
        base[s] = zleaf(n, k);
        for (int j = 0; j < n; ++j) {
            if (j == k || j == s) continue;
            if (p[j] != 0) {
                Letters q(n, 0);
                q[j] = p[j];
                base[j] = q;
            } else {
                base[j] = zleaf(n, j);
            }
        }
        out.push_back(base);
        if (w == 1) {
            const int u = supp.front(), a = p[u];
            auto fan = [&](const std::map<int, int>& vec) {
                std::map<int, Letters> t;
                t[u] = two_site(n, u, a, k, vec.at(k));
                for (int j = 0; j < n; ++j) {
                    if (j == u || j == k) continue;
                    t[j] = two_site(n, u, a, j, vec.at(j));
                }
                return t;
            };
            std::vector<int> positions;
            for (int j = 0; j < n; ++j)
                if (j != u) positions.push_back(j);
            for (int b = 1; b <= 3; ++b) {
                std::map<int, int> vec;
                for (int q : positions) vec[q] = b;
                out.push_back(fan(vec));
            }
            if (a != 3) {
                for (int tj = 0; tj < n; ++tj) {
                    if (tj == u) continue;
                    std::map<int, Letters> t;
                    if (tj == k) {
                        t[u] = two_site(n, u, a, k, 3);
                        for (int g = 0; g < n; ++g)
                            if (g != u && g != k) t[g] = zleaf(n, g);
                    } else {
                        t[u] = zleaf(n, k);
                        for (int g = 0; g < n; ++g) {
                            if (g == u || g == k) continue;
                            t[g] = (g == tj) ? two_site(n, u, a, g, 3) : zleaf(n, g);
                        }
                    }
                    out.push_back(t);
                }
            } else {
                // Z roots: diagonal fans with exactly one X/Y deviation.
                for (int tj : positions) {
                    for (int bp = 1; bp <= 2; ++bp) {
                        std::map<int, int> vec;
                        for (int q : positions) vec[q] = 3;
                        vec[tj] = bp;
                        out.push_back(fan(vec));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

GenSet build_vn(int n) {
    if (n < 1) throw ValidationError("build_vn: n must be >= 1");
    if (n > 8) throw ResourceError("build_vn: n too large");
    std::set<std::vector<RpUnit>> chans;

    auto add = [&](std::vector<RpUnit> units) {
        std::sort(units.begin(), units.end());
        if (!block_valid(n, units)) throw Error("build_vn: construction emitted an invalid block");
        chans.insert(std::move(units));
    };

    // Step 1: diagonal layers, every nonempty qubit subset with every flag mix.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<PauliIndex> zs;
        for (int j = 0; j < n; ++j)
            if ((mask >> j) & 1u) zs.push_back(letters_index(zleaf(n, j)));
        const unsigned r = static_cast<unsigned>(zs.size());
        for (unsigned f = 0; f < (1u << r); ++f) {
            std::vector<RpUnit> units;
            for (unsigned i = 0; i < r; ++i) units.push_back(RpUnit{zs[i], ((f >> i) & 1u) != 0});
            add(std::move(units));
        }
    }

    // Step 2: every non-identity root P at every row k (skipping the trivial
    // P = Z_k), with every partner subset and flag assignment.
    const PauliIndex dim = 1u << (2 * n);
    for (int k = 0; k < n; ++k) {
        const PauliIndex zk = letters_index(zleaf(n, k));
        for (PauliIndex pi = 1; pi < dim; ++pi) {
            if (pi == zk) continue;
            Letters p(n);
            PauliIndex rem = pi;
            for (int j = n - 1; j >= 0; --j) {
                p[j] = static_cast<int>(rem & 3u);
                rem >>= 2;
            }
            for (const auto& tup : tuples_for(n, p, k)) {
                std::vector<PauliIndex> partners;
                partners.reserve(tup.size());
                for (const auto& [row, img] : tup) partners.push_back(letters_index(img));
                const unsigned m = static_cast<unsigned>(partners.size());
                for (unsigned sub = 0; sub < (1u << m); ++sub) {
                    std::vector<PauliIndex> paulis{pi};
                    for (unsigned i = 0; i < m; ++i)
                        if ((sub >> i) & 1u) paulis.push_back(partners[i]);
                    std::set<PauliIndex> distinct(paulis.begin(), paulis.end());
                    if (distinct.size() != paulis.size()) continue;
                    const unsigned c = static_cast<unsigned>(paulis.size());
                    for (unsigned f = 0; f < (1u << c); ++f) {
                        std::vector<RpUnit> units;
                        for (unsigned i = 0; i < c; ++i)
                            units.push_back(RpUnit{paulis[i], ((f >> i) & 1u) != 0});
                        add(std::move(units));
                    }
                }
            }
        }
    }

    GenSet g;
    g.n = n;
    g.by_tcount.assign(n, {});
    for (const auto& units : chans) {
        Block b{n, units};
        g.keys.insert(block_key(b));
        g.by_tcount[b.tcount() - 1].push_back(std::move(b));
    }
    return g;
}

long long vn_upper_bound(int n) {
    if (n < 1) throw ValidationError("vn_upper_bound: n must be >= 1");
    long long v = 2ll * n;
    for (int i = 1; i < n; ++i) v *= 3;
    for (int i = 0; i < n; ++i) v *= 16;
    return v;
}

ChannelMatrix block_channel(const Block& b) {
    ChannelMatrix m = ChannelMatrix::identity(b.n);
    for (const auto& u : b.units) m = rp_apply_left(u, m);
    return m;
}

bool can_merge(const Block& b1, const Block& b2) {
    if (b1.n != b2.n) return false;
    std::vector<RpUnit> units = b1.units;
    units.insert(units.end(), b2.units.begin(), b2.units.end());
    return block_valid(b1.n, units);
}

Block merge_blocks(const Block& b1, const Block& b2) {
    if (!can_merge(b1, b2)) throw ValidationError("merge_blocks: union is not a valid block");
    std::vector<RpUnit> units = b1.units;
    units.insert(units.end(), b2.units.begin(), b2.units.end());
    return make_block(b1.n, std::move(units));
}

void each_valid_pauli_subset(int n,
                             const std::function<void(const std::vector<PauliIndex>&)>& fn) {
    const PauliIndex dim = 1u << (2 * n);
    std::vector<PauliIndex> cur;
    std::vector<SignedPauli> ps;
    auto rec = [&](auto&& self, PauliIndex start) -> void {
        if (!cur.empty()) fn(cur);
        if (static_cast<int>(cur.size()) == n) return;
        for (PauliIndex q = start; q < dim; ++q) {
            SignedPauli sq = pauli_from_index(n, q);
            bool ok = true;
            for (const auto& sp : ps)
                if (!pauli_commutes(sp, sq)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            ps.push_back(sq);
            if (independent(ps)) {
                cur.push_back(q);
                self(self, q + 1);
                cur.pop_back();
            }
            ps.pop_back();
        }
    };
    rec(rec, 1);
}

std::vector<ChannelMatrix> build_vn_dprime(int n) {
    if (n < 1) throw ValidationError("build_vn_dprime: n must be >= 1");
    if (n > 3) throw ResourceError("build_vn_dprime: practical for n <= 3 only");
    std::map<std::string, ChannelMatrix> by_digest;
    each_valid_pauli_subset(n, [&](const std::vector<PauliIndex>& paulis) {
        const unsigned c = static_cast<unsigned>(paulis.size());
        for (unsigned f = 0; f < (1u << c); ++f) {
            std::vector<RpUnit> units;
            for (unsigned i = 0; i < c; ++i)
                units.push_back(RpUnit{paulis[i], ((f >> i) & 1u) != 0});
            ChannelMatrix label = coset_label(block_channel(Block{n, units}));
            std::string dig = label_digest(label);
            by_digest.emplace(std::move(dig), std::move(label));
        }
    });
    std::vector<ChannelMatrix> out;
    out.reserve(by_digest.size());
    for (auto& [dig, label] : by_digest) out.push_back(std::move(label));
    return out;
}

namespace {

/** Digests of every <C layer C'> coset, brute-forced; cached per n. */
const std::set<std::string>& tdepth1_digests(int n) {
    static std::mutex mu;
    static std::map<int, std::set<std::string>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::set<std::vector<RpUnit>> blocks;
    for (const auto& c : enumerate_cliffords(n)) {
        // Layer: per-qubit choice of nothing / T / Tdg, at least one T-site.
        int layers = 1;
        for (int i = 0; i < n; ++i) layers *= 3;
        for (int l = 1; l < layers; ++l) {
            std::vector<RpUnit> units;
            int rem = l;
            for (int q = 0; q < n; ++q) {
                int choice = rem % 3;
                rem /= 3;
                if (choice == 0) continue;
                SignedPauli img = conjugate(c, pauli_from_index(n, letters_index(zleaf(n, q))));
                bool dag = (choice == 2) != img.neg;  // R(-P) folds to Rdg(P)
                units.push_back(RpUnit{pauli_index(img.unsigned_part()), dag});
            }
            std::sort(units.begin(), units.end());
            blocks.insert(std::move(units));
        }
    }
    std::set<std::string> digs;
    for (const auto& units : blocks) digs.insert(coset_digest(block_channel(Block{n, units})));
    return cache.emplace(n, std::move(digs)).first->second;
}

}  // namespace

bool tdepth1_oracle(const ChannelMatrix& a) {
    const int n = a.n();
    if (n < 1 || n > 2) throw ResourceError("tdepth1_oracle: brute force bounded to n <= 2");
    if (is_clifford_channel(a)) return true;
    return tdepth1_digests(n).count(coset_digest(a)) != 0;
}

void save_genset(const GenSet& g, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("save_genset: cannot open " + path);
    nlohmann::json header = {{"format", kGenSetFormat}, {"n", g.n}, {"count", g.size()}};
    out << header.dump() << "\n";
    for (const auto& b : g.all()) {
        nlohmann::json ju = nlohmann::json::array();
        for (const auto& u : b.units)
            ju.push_back({pauli_str(unit_pauli(g.n, u)), u.dagger ? "Tdg" : "T"});
        out << nlohmann::json{{"units", ju}}.dump() << "\n";
    }
    if (!out) throw Error("save_genset: write failed for " + path);
}

GenSet load_genset(const std::string& path, int expect_n) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_genset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("load_genset: empty file");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("load_genset: bad header: ") + e.what());
    }
    if (header.value("format", "") != kGenSetFormat)
        throw ParseError("load_genset: unsupported format version");
    if (header.value("n", -1) != expect_n) throw ParseError("load_genset: qubit count mismatch");
    const std::size_t count = header.value("count", std::size_t{0});

    GenSet g;
    g.n = expect_n;
    g.by_tcount.assign(expect_n, {});
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("load_genset: bad record: ") + e.what());
        }
        std::vector<RpUnit> units;
        for (const auto& ju : j.at("units")) {
            SignedPauli p = pauli_parse(ju.at(0).get<std::string>());
            if (p.n != expect_n || p.neg)
                throw ParseError("load_genset: unit Pauli must be unsigned width-n");
            const std::string flag = ju.at(1).get<std::string>();
            if (flag != "T" && flag != "Tdg") throw ParseError("load_genset: bad flag " + flag);
            units.push_back(RpUnit{pauli_index(p), flag == "Tdg"});
        }
        Block b;
        try {
            b = make_block(expect_n, std::move(units));
        } catch (const ValidationError& e) {
            throw ParseError(std::string("load_genset: invalid block: ") + e.what());
        }
        std::string key = block_key(b);
        if (!g.keys.insert(key).second) throw ParseError("load_genset: duplicate block " + key);
        g.by_tcount[b.tcount() - 1].push_back(std::move(b));
    }
    if (g.size() != count) throw ParseError("load_genset: count mismatch with header");
    return g;
}

}  // namespace tdsynth
