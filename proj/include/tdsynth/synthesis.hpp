#pragma once

#include "tdsynth/circuit.hpp"
#include "tdsynth/decomposition.hpp"

namespace tdsynth {

/** Tableau of one Clifford gate; throws ValidationError on T/Tdg. */
CliffordTableau gate_tableau(const Gate& g, int n);

/** Tableau of a Clifford-only circuit; throws ValidationError on T/Tdg. */
CliffordTableau tableau_of_circuit(const Circuit& c);

/**
 * Circuit over {H, S, Sdg, CNOT} plus Pauli sign fixups realizing the
 * tableau.  Gate count is not optimized.  The result is self-verified:
 * composing its gate tableaux reproduces the input exactly.
 */
Circuit tableau_to_circuit(const CliffordTableau& c);

/**
 * Circuit C T~(q) C' for one R~(P) unit, with C mapping Z_(q) to P and q the
 * lowest non-identity qubit of P.  Exact simulation equals the dense unit:
 * the conjugation cancels the synthesized Clifford's free global phase.
 */
Circuit rp_to_circuit(const RpUnit& u, int n);

/**
 * Per block one shared conjugating Clifford maps the commuting independent
 * Paulis simultaneously to Z on distinct low qubits, so each block costs
 * exactly one parallel T-stage; the trailing Clifford is synthesized from
 * its tableau.  Self-verified: the circuit's exact channel must equal the
 * decomposition's.
 */
Circuit decomposition_to_circuit(const Decomposition& dec);

enum class SynthClass { NoAncilla, OneAncilla, Reject };

/**
 * Determinant criterion for exact Clifford+T synthesizability of a unitary
 * with ring entries: det(U) is always an eighth root of unity w^k; without
 * an ancilla k must be a multiple of 2^(n-1) (n >= 4: det = 1).  Reject is
 * unreachable from exact input and never returned.
 */
SynthClass validate_exact_synthesizable(const UMat& u);

/** Channel of I_m (x) U; the m ancillas are the most significant qubits. */
ChannelMatrix handle_ancilla(const UMat& u, int m);

}  // namespace tdsynth
