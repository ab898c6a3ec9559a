#include "tdsynth/tableau.hpp"

#include <bit>
#include <unordered_map>

namespace tdsynth {

namespace {
inline int par(BitVec v) { return std::popcount(v) & 1; }
inline int pop4(BitVec v) { return std::popcount(v) & 3; }

// GF(2) span of xz-vectors (2n bits: x in low n, z in high n), row echelon.
struct Span {
    std::vector<std::uint64_t> rows;
    static std::uint64_t key(const SignedPauli& p, int n) {
        return static_cast<std::uint64_t>(p.x) | (static_cast<std::uint64_t>(p.z) << n);
    }
    bool contains(std::uint64_t v) const {
        for (auto r : rows)
            if ((v ^ r) < v) v ^= r;
        return v == 0;
    }
    void insert(std::uint64_t v) {
        for (auto r : rows)
            if ((v ^ r) < v) v ^= r;
        if (v) rows.push_back(v);
        for (size_t i = 1; i < rows.size(); ++i)
            for (size_t j = i; j > 0 && rows[j] > rows[j - 1]; --j) std::swap(rows[j], rows[j - 1]);
    }
};
}  // namespace

CliffordTableau CliffordTableau::identity(int n) {
    CliffordTableau c;
    c.n = n;
    c.img_x.resize(n);
    c.img_z.resize(n);
    for (int i = 0; i < n; ++i) {
        c.img_x[i] = SignedPauli{n, static_cast<BitVec>(1u << i), 0, false};
        c.img_z[i] = SignedPauli{n, 0, static_cast<BitVec>(1u << i), false};
    }
    return c;
}

bool tableau_valid(const CliffordTableau& c) {
    const int n = c.n;
    if (static_cast<int>(c.img_x.size()) != n || static_cast<int>(c.img_z.size()) != n)
        return false;
    for (int i = 0; i < n; ++i) {
        if (c.img_x[i].n != n || c.img_z[i].n != n) return false;
        if (c.img_x[i].is_identity() || c.img_z[i].is_identity()) return false;
        if (pauli_commutes(c.img_x[i], c.img_z[i])) return false;
        for (int j = i + 1; j < n; ++j) {
            if (!pauli_commutes(c.img_x[i], c.img_x[j])) return false;
            if (!pauli_commutes(c.img_z[i], c.img_z[j])) return false;
            if (!pauli_commutes(c.img_x[i], c.img_z[j])) return false;
            if (!pauli_commutes(c.img_z[i], c.img_x[j])) return false;
        }
    }
    return true;
}

SignedPauli conjugate(const CliffordTableau& c, const SignedPauli& p) {
    if (p.n != c.n) throw Error("conjugate: size mismatch");
    // Accumulate prod_q img_x[q]^{x_q} img_z[q]^{z_q} in the raw
    // i^t X^x Z^z representation, then add P's own phase.
    int t = 0;
    BitVec ax = 0, az = 0;
    for (int q = 0; q < c.n; ++q) {
        if ((p.x >> q) & 1) {
            const SignedPauli& g = c.img_x[q];
            t += pop4(g.x & g.z) + (g.neg ? 2 : 0) + 2 * par(az & g.x);
            ax ^= g.x;
            az ^= g.z;
        }
        if ((p.z >> q) & 1) {
            const SignedPauli& g = c.img_z[q];
            t += pop4(g.x & g.z) + (g.neg ? 2 : 0) + 2 * par(az & g.x);
            ax ^= g.x;
            az ^= g.z;
        }
    }
    t += pop4(p.x & p.z) + (p.neg ? 2 : 0);
    int phase = ((t - pop4(ax & az)) % 4 + 4) % 4;
    if (phase & 1) throw Error("conjugate: non-Hermitian result (invalid tableau)");
    return SignedPauli{c.n, ax, az, phase == 2};
}

CliffordTableau compose(const CliffordTableau& c2, const CliffordTableau& c1) {
    if (c2.n != c1.n) throw Error("compose: size mismatch");
    CliffordTableau r;
    r.n = c1.n;
    r.img_x.resize(r.n);
    r.img_z.resize(r.n);
    for (int i = 0; i < r.n; ++i) {
        r.img_x[i] = conjugate(c2, c1.img_x[i]);
        r.img_z[i] = conjugate(c2, c1.img_z[i]);
    }
    return r;
}

CliffordTableau tableau_inverse(const CliffordTableau& c) {
    const int n = c.n;
    const int m = 2 * n;
    // Column j of M is the xz-vector of the image of generator j
    // (generators ordered X_0..X_{n-1}, Z_0..Z_{n-1}).
    std::vector<std::uint64_t> col(m);
    for (int i = 0; i < n; ++i) {
        col[i] = Span::key(c.img_x[i], n);
        col[n + i] = Span::key(c.img_z[i], n);
    }
    auto solve = [&](std::uint64_t target) -> std::uint64_t {
        // Gaussian elimination on [M | target] for M v = target over GF(2).
        std::vector<std::uint64_t> rows(m, 0);  // row r: bits of M[r][*], bit m = rhs
        for (int r = 0; r < m; ++r) {
            std::uint64_t bits = 0;
            for (int j = 0; j < m; ++j)
                if ((col[j] >> r) & 1) bits |= (1ull << j);
            if ((target >> r) & 1) bits |= (1ull << m);
            rows[r] = bits;
        }
        std::vector<int> pivot_of_col(m, -1);
        int rr = 0;
        for (int j = 0; j < m && rr < m; ++j) {
            int pv = -1;
            for (int r2 = rr; r2 < m; ++r2)
                if ((rows[r2] >> j) & 1) {
                    pv = r2;
                    break;
                }
            if (pv < 0) continue;
            std::swap(rows[rr], rows[pv]);
            for (int r2 = 0; r2 < m; ++r2)
                if (r2 != rr && ((rows[r2] >> j) & 1)) rows[r2] ^= rows[rr];
            pivot_of_col[j] = rr;
            ++rr;
        }
        std::uint64_t v = 0;
        for (int j = 0; j < m; ++j)
            if (pivot_of_col[j] >= 0 && ((rows[pivot_of_col[j]] >> m) & 1)) v |= (1ull << j);
        return v;
    };
    CliffordTableau r;
    r.n = n;
    r.img_x.resize(n);
    r.img_z.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int kind = 0; kind < 2; ++kind) {
            SignedPauli target{n, kind == 0 ? static_cast<BitVec>(1u << i) : 0,
                               kind == 0 ? 0 : static_cast<BitVec>(1u << i), false};
            std::uint64_t v = solve(Span::key(target, n));
            SignedPauli pre{n, static_cast<BitVec>(v & ((1u << n) - 1)),
                            static_cast<BitVec>((v >> n) & ((1u << n) - 1)), false};
            SignedPauli img = conjugate(c, pre);
            if (img.x != target.x || img.z != target.z)
                throw Error("tableau_inverse: inconsistent tableau");
            pre.neg = img.neg;  // flip candidate sign so the image sign is +
            if (kind == 0)
                r.img_x[i] = pre;
            else
                r.img_z[i] = pre;
        }
    }
    return r;
}

CliffordTableau complete_tableau(int n,
                                 const std::vector<std::pair<int, SignedPauli>>& fixed_z,
                                 const std::vector<std::pair<int, SignedPauli>>& fixed_x) {
    const PauliIndex npauli = static_cast<PauliIndex>(1) << (2 * n);
    std::vector<std::optional<SignedPauli>> zs(n), xs(n);
    for (const auto& [i, p] : fixed_z) zs[i] = p;
    for (const auto& [i, p] : fixed_x) xs[i] = p;

    std::vector<SignedPauli> fixed;
    Span span;
    auto add_fixed = [&](const SignedPauli& p) {
        fixed.push_back(p);
        span.insert(Span::key(p, n));
    };
    for (int i = 0; i < n; ++i) {
        if (zs[i]) add_fixed(*zs[i]);
        if (xs[i]) add_fixed(*xs[i]);
    }

    // Candidate must commute with every fixed image except its own row
    // partner (anticommute), stay independent, and is scanned lowest
    // PauliIndex first with sign +.
    auto pick = [&](const std::optional<SignedPauli>& partner, bool need_indep) -> SignedPauli {
        for (PauliIndex idx = 1; idx < npauli; ++idx) {
            SignedPauli cand = pauli_from_index(n, idx, false);
            if (partner && pauli_commutes(cand, *partner)) continue;
            bool ok = true;
            for (const auto& f : fixed) {
                if (partner && f == *partner) continue;
                if (!pauli_commutes(cand, f)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            if (need_indep && span.contains(Span::key(cand, n))) continue;
            return cand;
        }
        throw Error("complete_tableau: no completion candidate (invalid partial tableau)");
    };

    for (int i = 0; i < n; ++i) {
        if (zs[i]) continue;
        SignedPauli p = pick(xs[i], true);
        zs[i] = p;
        add_fixed(p);
    }
    for (int i = 0; i < n; ++i) {
        if (xs[i]) continue;
        SignedPauli p = pick(zs[i], true);
        xs[i] = p;
        add_fixed(p);
    }

    CliffordTableau c;
    c.n = n;
    c.img_x.resize(n);
    c.img_z.resize(n);
    for (int i = 0; i < n; ++i) {
        c.img_x[i] = *xs[i];
        c.img_z[i] = *zs[i];
    }
    if (!tableau_valid(c)) throw Error("complete_tableau: completion not symplectic");
    return c;
}

void for_each_coset_leader(int n, int q,
                           const std::function<void(const CliffordTableau&)>& fn) {
    const PauliIndex npauli = static_cast<PauliIndex>(1) << (2 * n);
    for (PauliIndex zi = 1; zi < npauli; ++zi) {
        for (int zs = 0; zs < 2; ++zs) {
            SignedPauli p = pauli_from_index(n, zi, zs == 1);
            for (PauliIndex xi = 1; xi < npauli; ++xi) {
                SignedPauli qc = pauli_from_index(n, xi, false);
                if (pauli_commutes(p, qc)) continue;
                for (int xs = 0; xs < 2; ++xs) {
                    qc.neg = xs == 1;
                    fn(complete_tableau(n, {{q, p}}, {{q, qc}}));
                }
            }
        }
    }
}

std::vector<CliffordTableau> enumerate_coset_leaders(int n, int q) {
    std::vector<CliffordTableau> out;
    for_each_coset_leader(n, q, [&out](const CliffordTableau& c) { out.push_back(c); });
    return out;
}

std::vector<CliffordTableau> enumerate_cliffords(int n) {
    if (n > 2) throw ResourceError("enumerate_cliffords: practical only for n <= 2");
    // Generator tableaux: H_q, S_q, CNOT(a,b).
    std::vector<CliffordTableau> gens;
    for (int q = 0; q < n; ++q) {
        CliffordTableau h = CliffordTableau::identity(n);
        h.img_x[q] = SignedPauli{n, 0, static_cast<BitVec>(1u << q), false};
        h.img_z[q] = SignedPauli{n, static_cast<BitVec>(1u << q), 0, false};
        gens.push_back(h);
        CliffordTableau s = CliffordTableau::identity(n);
        s.img_x[q] = SignedPauli{n, static_cast<BitVec>(1u << q),
                                 static_cast<BitVec>(1u << q), false};
        gens.push_back(s);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            CliffordTableau cx = CliffordTableau::identity(n);
            cx.img_x[a] = SignedPauli{
                n, static_cast<BitVec>((1u << a) | (1u << b)), 0, false};
            cx.img_z[b] = SignedPauli{
                n, 0, static_cast<BitVec>((1u << a) | (1u << b)), false};
            gens.push_back(cx);
        }

    std::vector<CliffordTableau> out;
    std::unordered_map<CliffordTableau, int, TableauHash,
                       std::equal_to<CliffordTableau>>
        seen;
    out.push_back(CliffordTableau::identity(n));
    seen.emplace(out[0], 0);
    for (size_t head = 0; head < out.size(); ++head) {
        CliffordTableau cur = out[head];
        for (const auto& g : gens) {
            CliffordTableau nx = compose(g, cur);
            if (seen.emplace(nx, 1).second) out.push_back(nx);
        }
    }
    return out;
}

CliffordTableau find_clifford_mapping(const SignedPauli& p, const SignedPauli& p2) {
    if (p.n != p2.n) throw Error("find_clifford_mapping: size mismatch");
    if (p.is_identity() || p2.is_identity())
        throw Error("find_clifford_mapping: identity has no anticommuting partner");
    CliffordTableau t1 = complete_tableau(p.n, {{0, p}}, {});
    CliffordTableau t2 = complete_tableau(p.n, {{0, p2}}, {});
    CliffordTableau c = compose(t2, tableau_inverse(t1));
    SignedPauli img = conjugate(c, p);
    if (img != p2) throw Error("find_clifford_mapping: postcondition failed");
    return c;
}

}  // namespace tdsynth
