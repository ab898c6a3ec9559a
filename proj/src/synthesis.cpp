#include "tdsynth/synthesis.hpp"

#include <algorithm>
#include <vector>

namespace tdsynth {

namespace {

int lowest_bit(BitVec v) {
    int q = 0;
    while (!(v & 1u)) {
        v >>= 1;
        ++q;
    }
    return q;
}

bool xbit(const SignedPauli& p, int q) { return (p.x >> q) & 1u; }
bool zbit(const SignedPauli& p, int q) { return (p.z >> q) & 1u; }

}  // namespace

CliffordTableau gate_tableau(const Gate& g, int n) {
    if (g.q0 < 0 || g.q0 >= n || (g.kind == GateKind::CNOT && (g.q1 < 0 || g.q1 >= n || g.q1 == g.q0)))
        throw ValidationError("gate_tableau: operand out of range");
    CliffordTableau c = CliffordTableau::identity(n);
    switch (g.kind) {
        case GateKind::H:
            std::swap(c.img_x[g.q0], c.img_z[g.q0]);
            break;
        case GateKind::S:
            c.img_x[g.q0].z |= c.img_x[g.q0].x;  // X -> +Y
            break;
        case GateKind::Sdg:
            c.img_x[g.q0].z |= c.img_x[g.q0].x;  // X -> -Y
            c.img_x[g.q0].neg = true;
            break;
        case GateKind::X:
            c.img_z[g.q0].neg = true;
            break;
        case GateKind::Y:
            c.img_x[g.q0].neg = true;
            c.img_z[g.q0].neg = true;
            break;
        case GateKind::Z:
            c.img_x[g.q0].neg = true;
            break;
        case GateKind::CNOT:
            c.img_x[g.q0] = pauli_mul(c.img_x[g.q0], c.img_x[g.q1]);
            c.img_z[g.q1] = pauli_mul(c.img_z[g.q1], c.img_z[g.q0]);
            break;
        default:
            throw ValidationError("gate_tableau: not a Clifford gate");
    }
    return c;
}

CliffordTableau tableau_of_circuit(const Circuit& c) {
    CliffordTableau acc = CliffordTableau::identity(c.n);
    for (const Gate& g : c.gates) acc = compose(gate_tableau(g, c.n), acc);
    return acc;
}

Circuit tableau_to_circuit(const CliffordTableau& c) {
    if (c.n < 1 || !tableau_valid(c)) throw ValidationError("tableau_to_circuit: invalid tableau");
    const int n = c.n;
    std::vector<SignedPauli> ix = c.img_x, iz = c.img_z;
    std::vector<Gate> applied;  // conjugation order: G_k ... G_1 C = I
    auto apply = [&](GateKind k, int q0, int q1 = -1) {
        Gate g{k, q0, q1};
        CliffordTableau t = gate_tableau(g, n);
        for (auto& p : ix) p = conjugate(t, p);
        for (auto& p : iz) p = conjugate(t, p);
        applied.push_back(g);
    };

    for (int i = 0; i < n; ++i) {
        // Fixed rows j < i force identity wires there, so all work is on
        // wires >= i and earlier rows stay untouched.
        {
            // img_x[i] -> +-X_(i)
            const SignedPauli& p = ix[i];
            if (p.x == 0) apply(GateKind::H, lowest_bit(p.z));
            if (!xbit(p, i)) apply(GateKind::CNOT, lowest_bit(p.x), i);
            for (int r = 0; r < n; ++r)
                if (r != i && xbit(p, r)) apply(GateKind::CNOT, i, r);
            bool spread_z = false;
            for (int r = 0; r < n; ++r)
                if (r != i && zbit(p, r)) spread_z = true;
            if (spread_z && !zbit(p, i)) apply(GateKind::S, i);
            for (int r = 0; r < n; ++r)
                if (r != i && zbit(p, r)) apply(GateKind::CNOT, r, i);
            if (zbit(p, i)) apply(GateKind::S, i);
        }
        {
            // img_z[i] -> +-Z_(i) with gates fixing X_(i) up to sign
            const SignedPauli& q = iz[i];
            for (int r = i + 1; r < n; ++r)
                if (xbit(q, r)) {
                    if (zbit(q, r)) apply(GateKind::S, r);
                    apply(GateKind::H, r);
                }
            if (xbit(q, i)) {
                int r = -1;
                for (int s = i + 1; s < n; ++s)
                    if (zbit(q, s)) {
                        r = s;
                        break;
                    }
                if (r < 0) {
                    // q = +-Y_(i): HSH maps X -> X, Y -> Z
                    apply(GateKind::H, i);
                    apply(GateKind::S, i);
                    apply(GateKind::H, i);
                } else {
                    apply(GateKind::H, r);
                    apply(GateKind::CNOT, r, i);
                    if (zbit(q, r)) apply(GateKind::S, r);
                    apply(GateKind::H, r);
                }
            }
            for (int r = i + 1; r < n; ++r)
                if (zbit(q, r)) apply(GateKind::CNOT, r, i);
        }
    }
    for (int i = 0; i < n; ++i) {
        if (ix[i].neg && iz[i].neg) apply(GateKind::Y, i);
        else if (ix[i].neg) apply(GateKind::Z, i);
        else if (iz[i].neg) apply(GateKind::X, i);
    }
    CliffordTableau id = CliffordTableau::identity(n);
    if (ix != id.img_x || iz != id.img_z) throw Error("tableau_to_circuit: reduction failed");

    Circuit out;
    out.n = n;
    out.gates.reserve(applied.size());
    for (auto it = applied.rbegin(); it != applied.rend(); ++it)
        out.gates.push_back(Gate{gate_inverse(it->kind), it->q0, it->q1});
    if (tableau_of_circuit(out) != c) throw Error("tableau_to_circuit: self-check failed");
    return out;
}

Circuit rp_to_circuit(const RpUnit& u, int n) {
    if (n < 1 || u.pauli == 0 || u.pauli >= (1u << (2 * n)))
        throw ValidationError("rp_to_circuit: invalid unit");
    SignedPauli p = pauli_from_index(n, u.pauli);
    int wire = -1;  // lowest non-identity qubit; bit q of x/z is qubit q
    for (int j = 0; j < n && wire < 0; ++j)
        if (xbit(p, j) || zbit(p, j)) wire = j;
    SignedPauli zq{n, 0, static_cast<BitVec>(1u << wire), false};
    CliffordTableau map = p == zq ? CliffordTableau::identity(n) : find_clifford_mapping(zq, p);
    Circuit conj = tableau_to_circuit(map);

    Circuit out = inverse_circuit(conj);
    out.append(u.dagger ? GateKind::Tdg : GateKind::T, wire);
    out.append(conj);
    return out;
}

Circuit decomposition_to_circuit(const Decomposition& dec) {
    const int n = dec.n;
    if (n < 1) throw ValidationError("decomposition_to_circuit: empty decomposition");
    // Rightmost factor first: the trailing Clifford, then blocks in reverse.
    Circuit out = tableau_to_circuit(dec.trailing);
    for (auto bit = dec.blocks.rbegin(); bit != dec.blocks.rend(); ++bit) {
        const Block& b = *bit;
        if (b.n != n || !block_valid(n, b.units))
            throw ValidationError("decomposition_to_circuit: invalid block");
        // Map unit j's Pauli to Z on row j, preferring the unit's own wire
        // when the Pauli already is a plain Z so trivial blocks stay trivial.
        const int k = static_cast<int>(b.units.size());
        std::vector<int> row(k, -1);
        std::vector<bool> used(n, false);
        for (int j = 0; j < k; ++j) {
            SignedPauli p = pauli_from_index(n, b.units[j].pauli);
            if (p.x == 0 && (p.z & (p.z - 1)) == 0) {
                int w = lowest_bit(p.z);
                if (!used[w]) {
                    row[j] = w;
                    used[w] = true;
                }
            }
        }
        for (int j = 0; j < k; ++j) {
            if (row[j] >= 0) continue;
            for (int w = 0; w < n; ++w)
                if (!used[w]) {
                    row[j] = w;
                    used[w] = true;
                    break;
                }
        }
        std::vector<std::pair<int, SignedPauli>> fixed_z;
        fixed_z.reserve(k);
        for (int j = 0; j < k; ++j)
            fixed_z.push_back({row[j], pauli_from_index(n, b.units[j].pauli)});
        CliffordTableau shared = complete_tableau(n, fixed_z, {});
        Circuit conj = tableau_to_circuit(shared);

        out.append(inverse_circuit(conj));
        std::vector<std::pair<int, bool>> stage;
        for (int j = 0; j < k; ++j) stage.push_back({row[j], b.units[j].dagger});
        std::sort(stage.begin(), stage.end());
        for (auto [w, dg] : stage) out.append(dg ? GateKind::Tdg : GateKind::T, w);
        out.append(conj);
    }
    if (channel_of(simulate_exact(out)) != decomposition_channel(dec))
        throw Error("decomposition_to_circuit: self-check failed");
    return out;
}

SynthClass validate_exact_synthesizable(const UMat& u) {
    if (u.dim() < 2 || (u.dim() & (u.dim() - 1)) != 0)
        throw ValidationError("validate_exact_synthesizable: dimension is not a power of two");
    if (!u.is_unitary()) throw ValidationError("validate_exact_synthesizable: not unitary");
    int n = 0;
    while ((1 << n) < u.dim()) ++n;

    GaussianRootTwo det = u.det();
    GaussianRootTwo pw = GaussianRootTwo::one();
    int k = -1;
    for (int r = 0; r < 8; ++r) {
        if (det == pw) {
            k = r;
            break;
        }
        pw = pw * GaussianRootTwo::omega();
    }
    // A unitary over the ring always has an eighth-root-of-unity determinant;
    // anything else would be a broken input, not a rejectable approximation.
    if (k < 0) throw Error("validate_exact_synthesizable: determinant is not a ring unit");

    int step = 1 << std::min(n - 1, 3);  // allowed exponents are multiples of 2^(n-1)
    return k % step == 0 ? SynthClass::NoAncilla : SynthClass::OneAncilla;
}

ChannelMatrix handle_ancilla(const UMat& u, int m) {
    if (m < 0) throw ValidationError("handle_ancilla: negative ancilla count");
    return tensor_with_identity(channel_of(u), m);
}

}  // namespace tdsynth
