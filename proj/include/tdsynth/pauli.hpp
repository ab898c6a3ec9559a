#pragma once

#include <cstdint>
#include <string>

#include "tdsynth/matrix.hpp"
#include "tdsynth/ring.hpp"

namespace tdsynth {

using BitVec = std::uint32_t;
using PauliIndex = std::uint32_t;

/**
 * Hermitian signed Pauli operator on n qubits:
 *   (-1)^neg * prod_q W(x_q, z_q),  W(1,1) = Y = i X Z.
 * Bit q of x/z holds qubit q's X/Z part.  Qubit 0 is the first (most
 * significant) qubit in index order.
 */
struct SignedPauli {
    int n = 0;
    BitVec x = 0, z = 0;
    bool neg = false;

    bool is_identity() const { return x == 0 && z == 0; }
    SignedPauli negated() const { return {n, x, z, !neg}; }
    SignedPauli unsigned_part() const { return {n, x, z, false}; }

    bool operator==(const SignedPauli& o) const {
        return n == o.n && x == o.x && z == o.z && neg == o.neg;
    }
    bool operator!=(const SignedPauli& o) const { return !(*this == o); }
};

/**
 * Base-4 encoding of an unsigned Pauli: digits I=0, X=1, Y=2, Z=3 with
 * qubit 0 as the most significant digit.  Normative row/column order for
 * channel matrices.
 */
PauliIndex pauli_index(const SignedPauli& p);
SignedPauli pauli_from_index(int n, PauliIndex idx, bool neg = false);

bool pauli_commutes(const SignedPauli& p, const SignedPauli& q);

/**
 * Product of two Hermitian signed Paulis when it is again Hermitian, i.e.
 * when they commute.  Throws Error for anticommuting pairs (phase +-i is not
 * representable).
 */
SignedPauli pauli_mul(const SignedPauli& p, const SignedPauli& q);

/**
 * Raw product P*Q = i^phase * W(x,z) with phase in [0,4); works for
 * anticommuting pairs too.  Sign of P/Q folded into phase.
 */
void pauli_mul_raw(const SignedPauli& p, const SignedPauli& q, BitVec& x, BitVec& z, int& phase);

/** "+XZY" / "-IIZ" (qubit 0 first). */
std::string pauli_str(const SignedPauli& p);
SignedPauli pauli_parse(const std::string& s);

/** Dense 2^n x 2^n matrix of the operator (exact). */
UMat pauli_matrix(const SignedPauli& p);

struct SignedPauliHash {
    std::size_t operator()(const SignedPauli& p) const {
        return (static_cast<std::size_t>(p.x) << 24) ^ (static_cast<std::size_t>(p.z) << 2) ^
               (p.neg ? 1u : 0u) ^ (static_cast<std::size_t>(p.n) << 56);
    }
};

}  // namespace tdsynth
