#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdsynth/channel.hpp"
#include "tdsynth/circuit.hpp"

namespace tdsynth {

/**
 * Circuit text: "# n <qubits>" header, then one gate per line ("h 0",
 * "tdg 2", "cnot 0 1"), plus comment lines with the metrics.  The parser
 * ignores comments except the n header; without one, n is inferred from
 * the largest operand.
 */
std::string circuit_to_text(const Circuit& c);
Circuit parse_circuit_text(const std::string& text);

/** QASM-2 subset: header, one qreg, and the gate list (cx for CNOT). */
std::string circuit_to_qasm(const Circuit& c);

/**
 * JSON forms.  A unitary is {"n": q, "matrix": [[[a,b,c,d,k], ...], ...]}
 * with one five-integer ring element per entry; a channel is
 * {"n": q, "channel": [[[a,b,k], ...], ...]}.
 */
std::string unitary_to_json(const UMat& u);
std::string channel_to_json(const ChannelMatrix& a);

/** Exactly one of the two members is engaged. */
struct SynthInput {
    std::optional<UMat> unitary;
    std::optional<ChannelMatrix> channel;
    int n = 0;
};
SynthInput parse_input_json(const std::string& text);

/** Named benchmark unitaries, all permutation matrices. */
UMat builtin_unitary(const std::string& name);
const std::vector<std::string>& builtin_names();

/**
 * Deterministic random circuit: t_depth nonempty parallel T-layers
 * alternating with random Clifford stages (random tableau walk, then
 * synthesized back to gates).  Every T-layer touches one spine wire so the
 * layers chain causally; the recomputed T-depth is asserted equal to the
 * request.  Identical (n, t_depth, seed) gives an identical gate list.
 */
Circuit random_circuit(int n, int t_depth, std::uint64_t seed);

}  // namespace tdsynth
