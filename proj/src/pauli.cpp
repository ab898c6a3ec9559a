#include "tdsynth/pauli.hpp"

#include <bit>

namespace tdsynth {

namespace {
inline int par(BitVec v) { return std::popcount(v) & 1; }
inline int pop4(BitVec v) { return std::popcount(v) & 3; }
}  // namespace

PauliIndex pauli_index(const SignedPauli& p) {
    PauliIndex idx = 0;
    for (int q = 0; q < p.n; ++q) {
        bool xb = (p.x >> q) & 1, zb = (p.z >> q) & 1;
        int digit = xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
        idx = idx * 4 + static_cast<PauliIndex>(digit);
    }
    return idx;
}

SignedPauli pauli_from_index(int n, PauliIndex idx, bool neg) {
    SignedPauli p{n, 0, 0, neg};
    for (int q = n - 1; q >= 0; --q) {
        int digit = idx & 3;
        idx >>= 2;
        if (digit == 1 || digit == 2) p.x |= (1u << q);
        if (digit == 2 || digit == 3) p.z |= (1u << q);
    }
    return p;
}

bool pauli_commutes(const SignedPauli& p, const SignedPauli& q) {
    return ((par(p.x & q.z) ^ par(p.z & q.x)) & 1) == 0;
}

void pauli_mul_raw(const SignedPauli& p, const SignedPauli& q, BitVec& x, BitVec& z, int& phase) {
    // i^t X^x Z^z representation: t(P) = popcount(x&z) + 2*neg.
    int t1 = pop4(p.x & p.z) + (p.neg ? 2 : 0);
    int t2 = pop4(q.x & q.z) + (q.neg ? 2 : 0);
    int t = t1 + t2 + 2 * par(p.z & q.x);
    x = p.x ^ q.x;
    z = p.z ^ q.z;
    // Normalize back to i^phase * W(x,z).
    phase = ((t - pop4(x & z)) % 4 + 4) % 4;
}

SignedPauli pauli_mul(const SignedPauli& p, const SignedPauli& q) {
    if (p.n != q.n) throw Error("pauli_mul: size mismatch");
    BitVec x, z;
    int phase;
    pauli_mul_raw(p, q, x, z, phase);
    if (phase & 1) throw Error("pauli_mul: anticommuting operands (phase +-i)");
    return SignedPauli{p.n, x, z, phase == 2};
}

std::string pauli_str(const SignedPauli& p) {
    std::string s(p.neg ? "-" : "+");
    for (int q = 0; q < p.n; ++q) {
        bool xb = (p.x >> q) & 1, zb = (p.z >> q) & 1;
        s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return s;
}

SignedPauli pauli_parse(const std::string& s) {
    if (s.size() < 2 || (s[0] != '+' && s[0] != '-')) throw ParseError("pauli: bad string " + s);
    SignedPauli p{static_cast<int>(s.size()) - 1, 0, 0, s[0] == '-'};
    if (p.n > 16) throw ParseError("pauli: too many qubits");
    for (int q = 0; q < p.n; ++q) {
        switch (s[static_cast<size_t>(q) + 1]) {
            case 'I': break;
            case 'X': p.x |= (1u << q); break;
            case 'Y': p.x |= (1u << q); p.z |= (1u << q); break;
            case 'Z': p.z |= (1u << q); break;
            default: throw ParseError("pauli: bad letter in " + s);
        }
    }
    return p;
}

UMat pauli_matrix(const SignedPauli& p) {
    const int N = 1 << p.n;
    UMat m(N);
    // W(x,z)|j> = i^{popcount(x&z)} (-1)^{z.j} |j ^ x>, with qubit q at bit (n-1-q).
    BitVec xr = 0, zr = 0;
    for (int q = 0; q < p.n; ++q) {
        if ((p.x >> q) & 1) xr |= (1u << (p.n - 1 - q));
        if ((p.z >> q) & 1) zr |= (1u << (p.n - 1 - q));
    }
    int tp = (pop4(p.x & p.z) + (p.neg ? 2 : 0)) & 3;
    static const GaussianRootTwo kI[4] = {
        GaussianRootTwo::one(), GaussianRootTwo::i(), -GaussianRootTwo::one(),
        -GaussianRootTwo::i()};
    for (int j = 0; j < N; ++j) {
        int ph = (tp + 2 * par(zr & static_cast<BitVec>(j))) & 3;
        m.at(static_cast<int>(static_cast<BitVec>(j) ^ xr), j) = kI[ph];
    }
    return m;
}

}  // namespace tdsynth
