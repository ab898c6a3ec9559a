#pragma once

#include <string>
#include <vector>

#include "tdsynth/matrix.hpp"

namespace tdsynth {

enum class GateKind { H, S, Sdg, T, Tdg, X, Y, Z, CNOT };

struct Gate {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;  // CNOT target

    bool operator==(const Gate& o) const {
        return kind == o.kind && q0 == o.q0 && q1 == o.q1;
    }
};

/** Gate list in program order: gates[0] is applied first. */
struct Circuit {
    int n = 0;
    std::vector<Gate> gates;

    void append(GateKind k, int q0, int q1 = -1) { gates.push_back(Gate{k, q0, q1}); }
    void append(const Circuit& o) {
        gates.insert(gates.end(), o.gates.begin(), o.gates.end());
    }
};

struct DepthMetrics {
    int t_count = 0;
    int t_depth = 0;
};

bool gate_is_clifford(GateKind k);
GateKind gate_inverse(GateKind k);
std::string gate_name(GateKind k);

/**
 * t_count and t_depth of the circuit.  t_depth is the longest path in the
 * gate DAG counting only T/Tdg nodes; Clifford gates create ordering but add
 * no depth.
 */
DepthMetrics circuit_depth_metrics(const Circuit& c);

/** Reversed gate order with every gate inverted. */
Circuit inverse_circuit(const Circuit& c);

/** Exact 2^n x 2^n unitary of the circuit. */
UMat simulate_exact(const Circuit& c);

/** Dense matrix of a single gate on an n-qubit register. */
UMat gate_matrix(const Gate& g, int n);

}  // namespace tdsynth
