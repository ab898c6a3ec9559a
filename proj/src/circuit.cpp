#include "tdsynth/circuit.hpp"

#include <algorithm>

namespace tdsynth {

bool gate_is_clifford(GateKind k) { return k != GateKind::T && k != GateKind::Tdg; }

GateKind gate_inverse(GateKind k) {
    switch (k) {
        case GateKind::S: return GateKind::Sdg;
        case GateKind::Sdg: return GateKind::S;
        case GateKind::T: return GateKind::Tdg;
        case GateKind::Tdg: return GateKind::T;
        default: return k;
    }
}

std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::Sdg: return "sdg";
        case GateKind::T: return "t";
        case GateKind::Tdg: return "tdg";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::CNOT: return "cnot";
    }
    return "?";
}

DepthMetrics circuit_depth_metrics(const Circuit& c) {
    DepthMetrics m;
    std::vector<int> frontier(static_cast<size_t>(c.n), 0);
    for (const Gate& g : c.gates) {
        bool is_t = g.kind == GateKind::T || g.kind == GateKind::Tdg;
        if (is_t) ++m.t_count;
        int d = frontier[g.q0];
        if (g.q1 >= 0) d = std::max(d, frontier[g.q1]);
        if (is_t) ++d;
        frontier[g.q0] = d;
        if (g.q1 >= 0) frontier[g.q1] = d;
        m.t_depth = std::max(m.t_depth, d);
    }
    return m;
}

Circuit inverse_circuit(const Circuit& c) {
    Circuit r;
    r.n = c.n;
    r.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
        r.gates.push_back(Gate{gate_inverse(it->kind), it->q0, it->q1});
    return r;
}

}  // namespace tdsynth
