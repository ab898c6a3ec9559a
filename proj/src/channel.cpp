#include "tdsynth/channel.hpp"

#include <algorithm>

namespace tdsynth {

int ChannelMatrix::sde() const {
    int k = 0;
    for (const auto& v : d_) k = std::max(k, v.sde());
    return k;
}

bool ChannelMatrix::is_orthogonal() const {
    for (int i = 0; i < dim_; ++i) {
        for (int j = i; j < dim_; ++j) {
            DyadicRootTwo dot;
            for (int r = 0; r < dim_; ++r) {
                const DyadicRootTwo& x = at(r, i);
                const DyadicRootTwo& y = at(r, j);
                if (!x.is_zero() && !y.is_zero()) dot = dot + x * y;
            }
            if (dot != (i == j ? DyadicRootTwo::one() : DyadicRootTwo::zero())) return false;
        }
    }
    return true;
}

ChannelMatrix channel_of(const UMat& u) {
    int dim = u.dim();
    int n = 0;
    while ((1 << n) < dim) ++n;
    if ((1 << n) != dim) throw ValidationError("channel_of: dimension is not a power of two");
    if (!u.is_unitary()) throw ValidationError("channel_of: input is not unitary");

    UMat ud = u.dagger();
    ChannelMatrix m(n);
    std::vector<UMat> paulis(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        paulis[i] = pauli_matrix(pauli_from_index(n, static_cast<PauliIndex>(i)));
    for (int s = 0; s < m.dim(); ++s) {
        UMat mid = u * paulis[s] * ud;
        for (int r = 0; r < m.dim(); ++r) {
            GaussianRootTwo tr;
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k) {
                    const GaussianRootTwo& pv = paulis[r].at(j, k);
                    if (pv.is_zero()) continue;
                    tr = tr + pv * mid.at(k, j);
                }
            tr = tr.div_root2(2 * n);
            if (!tr.is_real()) throw ValidationError("channel_of: entry has imaginary part");
            m.at(r, s) = tr.to_dyadic();
        }
    }
    return m;
}

ChannelMatrix channel_mul(const ChannelMatrix& a, const ChannelMatrix& b) {
    if (a.n() != b.n()) throw Error("channel_mul: size mismatch");
    ChannelMatrix m(a.n());
    int dim = a.dim();
    for (int r = 0; r < dim; ++r) {
        for (int k = 0; k < dim; ++k) {
            const DyadicRootTwo& x = a.at(r, k);
            if (x.is_zero()) continue;
            for (int c = 0; c < dim; ++c) {
                const DyadicRootTwo& y = b.at(k, c);
                if (y.is_zero()) continue;
                m.at(r, c) = m.at(r, c) + x * y;
            }
        }
    }
    return m;
}

ChannelMatrix channel_inverse(const ChannelMatrix& a) {
    ChannelMatrix m(a.n());
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) m.at(c, r) = a.at(r, c);
    return m;
}

UMat rp_dense(int n, PauliIndex pauli, bool dagger) {
    if (pauli == 0) throw Error("rp_dense: identity Pauli");
    GaussianRootTwo w = GaussianRootTwo::omega();
    if (dagger) w = w.conj();
    GaussianRootTwo half(1, 0, 0, 0, 2);  // 1/2
    GaussianRootTwo ci = (GaussianRootTwo::one() + w) * half;
    GaussianRootTwo cp = (GaussianRootTwo::one() - w) * half;
    UMat id = UMat::identity(1 << n);
    UMat p = pauli_matrix(pauli_from_index(n, pauli));
    UMat m(1 << n);
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c)
            m.at(r, c) = ci * id.at(r, c) + cp * p.at(r, c);
    return m;
}

namespace {

// Pairing for one anticommuting row r: partner index m(r) = index of the
// unsigned part of P_r * P, and the coefficient of row m(r) in the image of
// row r under left multiplication by the channel of R~(P).
struct RowPair {
    PauliIndex partner;
    bool minus;  // coefficient -1/sqrt2 instead of +1/sqrt2
};

RowPair row_pair(int n, PauliIndex r, const RpUnit& unit) {
    SignedPauli pr = pauli_from_index(n, r);
    SignedPauli p = pauli_from_index(n, unit.pauli);
    BitVec x = 0, z = 0;
    int phase = 0;
    pauli_mul_raw(pr, p, x, z, phase);
    // Row update row_r <- (row_r + sigma row_m)/sqrt2.  sigma is the matrix
    // entry at (r, m(r)), i.e. the cross coefficient of column m(r), whose
    // raw phase is the negation of phase here; for R(P) that gives
    // i^{phase+3}, and the adjoint flips the cross sign to i^{phase+1}.
    // phase is odd for anticommuting pairs, so sigma is +-1.
    int ph = (phase + (unit.dagger ? 1 : 3)) & 3;
    if (ph != 0 && ph != 2) throw Error("row_pair: non-real pairing phase");
    return RowPair{pauli_index(SignedPauli{n, x, z, false}), ph == 2};
}

}  // namespace

ChannelMatrix rp_apply_left(const RpUnit& unit, const ChannelMatrix& a) {
    if (unit.pauli == 0) throw Error("rp_apply_left: identity Pauli");
    int n = a.n();
    SignedPauli p = pauli_from_index(n, unit.pauli);
    ChannelMatrix m = a;
    for (PauliIndex r = 0; r < static_cast<PauliIndex>(a.dim()); ++r) {
        SignedPauli pr = pauli_from_index(n, r);
        if (pauli_commutes(pr, p)) continue;
        RowPair rp = row_pair(n, r, unit);
        for (int c = 0; c < a.dim(); ++c) {
            DyadicRootTwo v = a.at(static_cast<int>(r), c);
            DyadicRootTwo w = a.at(static_cast<int>(rp.partner), c);
            if (rp.minus) v = v - w;
            else v = v + w;
            m.at(static_cast<int>(r), c) = v.div_root2(1);
        }
    }
    return m;
}

void rp_apply_left_inplace(const RpUnit& unit, ChannelMatrix& a) {
    if (unit.pauli == 0) throw Error("rp_apply_left_inplace: identity Pauli");
    int n = a.n();
    SignedPauli p = pauli_from_index(n, unit.pauli);
    for (PauliIndex r = 0; r < static_cast<PauliIndex>(a.dim()); ++r) {
        SignedPauli pr = pauli_from_index(n, r);
        if (pauli_commutes(pr, p)) continue;
        RowPair rp = row_pair(n, r, unit);
        if (rp.partner < r) continue;  // each pair once, from the lower index
        RowPair rq = row_pair(n, rp.partner, unit);
        for (int c = 0; c < a.dim(); ++c) {
            DyadicRootTwo v = a.at(static_cast<int>(r), c);
            DyadicRootTwo w = a.at(static_cast<int>(rp.partner), c);
            a.at(static_cast<int>(r), c) = (rp.minus ? v - w : v + w).div_root2(1);
            a.at(static_cast<int>(rp.partner), c) = (rq.minus ? w - v : w + v).div_root2(1);
        }
    }
}

ChannelMatrix rp_channel(int n, const RpUnit& unit) {
    return rp_apply_left(unit, ChannelMatrix::identity(n));
}

int hamming_weight(const ChannelMatrix& a) {
    int w = 0;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c)
            if (!a.at(r, c).is_zero()) ++w;
    return w;
}

bool is_clifford_channel(const ChannelMatrix& a) {
    std::vector<bool> row_used(a.dim(), false);
    for (int c = 0; c < a.dim(); ++c) {
        int found = -1;
        for (int r = 0; r < a.dim(); ++r) {
            const DyadicRootTwo& v = a.at(r, c);
            if (v.is_zero()) continue;
            if (found >= 0) return false;
            if (v != DyadicRootTwo::one() && v != -DyadicRootTwo::one()) return false;
            found = r;
        }
        if (found < 0 || row_used[found]) return false;
        row_used[found] = true;
    }
    return true;
}

ChannelMatrix channel_of_tableau(const CliffordTableau& c) {
    ChannelMatrix m(c.n);
    for (PauliIndex s = 0; s < static_cast<PauliIndex>(m.dim()); ++s) {
        SignedPauli img = conjugate(c, pauli_from_index(c.n, s));
        m.at(static_cast<int>(pauli_index(img)), static_cast<int>(s)) =
            img.neg ? -DyadicRootTwo::one() : DyadicRootTwo::one();
    }
    return m;
}

CliffordTableau channel_to_tableau(const ChannelMatrix& a) {
    if (!is_clifford_channel(a)) throw ValidationError("channel_to_tableau: not a Clifford channel");
    int n = a.n();
    auto image_of = [&](const SignedPauli& gen) {
        int s = static_cast<int>(pauli_index(gen));
        for (int r = 0; r < a.dim(); ++r) {
            const DyadicRootTwo& v = a.at(r, s);
            if (!v.is_zero())
                return pauli_from_index(n, static_cast<PauliIndex>(r), v.a() < 0);
        }
        throw ValidationError("channel_to_tableau: zero column");
    };
    CliffordTableau c = CliffordTableau::identity(n);
    for (int i = 0; i < n; ++i) {
        c.img_x[i] = image_of(c.img_x[i]);
        c.img_z[i] = image_of(c.img_z[i]);
    }
    if (!tableau_valid(c)) throw ValidationError("channel_to_tableau: images not symplectic");
    // Generator columns alone underdetermine the matrix: a signed permutation
    // can agree on them yet differ on composite rows, and then it is not the
    // channel of any Clifford.  The exact round trip rejects those.
    if (channel_of_tableau(c) != a)
        throw ValidationError("channel_to_tableau: not the channel of a Clifford");
    return c;
}

ChannelMatrix tensor_with_identity(const ChannelMatrix& a, int m) {
    if (m == 0) return a;
    ChannelMatrix r(a.n() + m);
    int blocks = 1 << (2 * m);
    for (int t = 0; t < blocks; ++t)
        for (int i = 0; i < a.dim(); ++i)
            for (int j = 0; j < a.dim(); ++j)
                r.at(t * a.dim() + i, t * a.dim() + j) = a.at(i, j);
    return r;
}

}  // namespace tdsynth
