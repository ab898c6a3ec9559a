#include "tdsynth/circuit.hpp"

namespace tdsynth {

namespace {

struct Gate2x2 {
    GaussianRootTwo e00, e01, e10, e11;
};

Gate2x2 single_qubit_entries(GateKind k) {
    const GaussianRootTwo zero = GaussianRootTwo::zero();
    const GaussianRootTwo one = GaussianRootTwo::one();
    const GaussianRootTwo im = GaussianRootTwo::i();
    const GaussianRootTwo rhalf(1, 0, 0, 0, 1);  // 1/sqrt2
    switch (k) {
        case GateKind::H: return {rhalf, rhalf, rhalf, -rhalf};
        case GateKind::S: return {one, zero, zero, im};
        case GateKind::Sdg: return {one, zero, zero, -im};
        case GateKind::T: return {one, zero, zero, GaussianRootTwo(1, 1, 0, 0, 1)};
        case GateKind::Tdg: return {one, zero, zero, GaussianRootTwo(1, -1, 0, 0, 1)};
        case GateKind::X: return {zero, one, one, zero};
        case GateKind::Y: return {zero, -im, im, zero};
        case GateKind::Z: return {one, zero, zero, -one};
        case GateKind::CNOT: break;
    }
    throw Error("single_qubit_entries: not a single-qubit gate");
}

}  // namespace

UMat simulate_exact(const Circuit& c) {
    const int n = c.n;
    const int N = 1 << n;
    UMat m = UMat::identity(N);
    for (const Gate& g : c.gates) {
        if (g.q0 < 0 || g.q0 >= n || (g.kind == GateKind::CNOT && (g.q1 < 0 || g.q1 >= n)))
            throw Error("simulate_exact: qubit index out of range");
        if (g.kind == GateKind::CNOT) {
            if (g.q1 == g.q0) throw Error("simulate_exact: cnot with equal qubits");
            const int cb = 1 << (n - 1 - g.q0);
            const int tb = 1 << (n - 1 - g.q1);
            for (int r = 0; r < N; ++r) {
                if ((r & cb) && !(r & tb)) {
                    for (int j = 0; j < N; ++j) std::swap(m.at(r, j), m.at(r | tb, j));
                }
            }
        } else {
            const Gate2x2 e = single_qubit_entries(g.kind);
            const int qb = 1 << (n - 1 - g.q0);
            for (int r = 0; r < N; ++r) {
                if (r & qb) continue;
                const int r1 = r | qb;
                for (int j = 0; j < N; ++j) {
                    GaussianRootTwo v0 = m.at(r, j), v1 = m.at(r1, j);
                    m.at(r, j) = e.e00 * v0 + e.e01 * v1;
                    m.at(r1, j) = e.e10 * v0 + e.e11 * v1;
                }
            }
        }
    }
    return m;
}

UMat gate_matrix(const Gate& g, int n) {
    Circuit c;
    c.n = n;
    c.gates.push_back(g);
    return simulate_exact(c);
}

}  // namespace tdsynth
