#pragma once

#include <vector>

#include "tdsynth/matrix.hpp"
#include "tdsynth/pauli.hpp"
#include "tdsynth/tableau.hpp"

namespace tdsynth {

/**
 * One factor R(P) = (1+w)/2 I + (1-w)/2 P with w = e^{i pi/4}, or its
 * adjoint.  Signs are folded away: R(-P) has the same channel as R†(P), so
 * pauli is always an unsigned non-identity index.
 */
struct RpUnit {
    PauliIndex pauli = 0;
    bool dagger = false;

    bool operator==(const RpUnit& o) const { return pauli == o.pauli && dagger == o.dagger; }
    bool operator<(const RpUnit& o) const {
        return pauli != o.pauli ? pauli < o.pauli : dagger < o.dagger;
    }
};

/**
 * Channel representation: the 4^n x 4^n real matrix with
 * M[r][s] = (1/2^n) Tr(P_r U P_s U†), rows and columns in PauliIndex order.
 * Exact, orthogonal, entries in Z[1/sqrt2].
 */
class ChannelMatrix {
  public:
    ChannelMatrix() : n_(0), dim_(0) {}
    explicit ChannelMatrix(int n)
        : n_(n), dim_(1 << (2 * n)), d_(static_cast<size_t>(dim_) * dim_) {}

    static ChannelMatrix identity(int n) {
        ChannelMatrix m(n);
        for (int i = 0; i < m.dim_; ++i) m.at(i, i) = DyadicRootTwo::one();
        return m;
    }

    int n() const { return n_; }
    int dim() const { return dim_; }

    DyadicRootTwo& at(int r, int c) { return d_[static_cast<size_t>(r) * dim_ + c]; }
    const DyadicRootTwo& at(int r, int c) const {
        return d_[static_cast<size_t>(r) * dim_ + c];
    }

    bool operator==(const ChannelMatrix& o) const { return n_ == o.n_ && d_ == o.d_; }
    bool operator!=(const ChannelMatrix& o) const { return !(*this == o); }

    /** Common denominator exponent: max entry sde. */
    int sde() const;
    bool is_orthogonal() const;

  private:
    int n_, dim_;
    std::vector<DyadicRootTwo> d_;
};

/** Exact channel of a unitary; throws ValidationError if U†U != I. */
ChannelMatrix channel_of(const UMat& u);

ChannelMatrix channel_mul(const ChannelMatrix& a, const ChannelMatrix& b);

/** Real orthogonal, so the inverse is the transpose. */
ChannelMatrix channel_inverse(const ChannelMatrix& a);

/** Dense 2^n x 2^n matrix of R(P) or R†(P); the oracle for rp_channel. */
UMat rp_dense(int n, PauliIndex pauli, bool dagger);

/**
 * Channel of one R~(P) unit, built from the pairing structure: rows of
 * commuting P_r are unit vectors; anticommuting rows mix with one partner
 * row at weight 1/sqrt2 each.
 */
ChannelMatrix rp_channel(int n, const RpUnit& unit);

/** Sparse left product rp_channel(unit) * a: 2^{2n-1} row-pair updates. */
ChannelMatrix rp_apply_left(const RpUnit& unit, const ChannelMatrix& a);

/** rp_apply_left without the copy; each anticommuting row pair updates once. */
void rp_apply_left_inplace(const RpUnit& unit, ChannelMatrix& a);

int hamming_weight(const ChannelMatrix& a);

/** Signed permutation matrix, i.e. the channel of some Clifford. */
bool is_clifford_channel(const ChannelMatrix& a);

/** Signed-permutation channel of a Clifford given as a tableau. */
ChannelMatrix channel_of_tableau(const CliffordTableau& c);

/** Inverse of channel_of_tableau; throws ValidationError on non-Cliffords. */
CliffordTableau channel_to_tableau(const ChannelMatrix& a);

/** Channel of I_m (x) U with the m ancillas prepended as qubits 0..m-1. */
ChannelMatrix tensor_with_identity(const ChannelMatrix& a, int m);

}  // namespace tdsynth
