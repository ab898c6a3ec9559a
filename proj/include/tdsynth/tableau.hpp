#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tdsynth/pauli.hpp"

namespace tdsynth {

/**
 * Clifford tableau: images of the generators under conjugation,
 * img_x[i] = C X_(i) C†, img_z[i] = C Z_(i) C†.  Determines the Clifford
 * modulo global phase.
 */
struct CliffordTableau {
    int n = 0;
    std::vector<SignedPauli> img_x, img_z;

    static CliffordTableau identity(int n);

    bool operator==(const CliffordTableau& o) const {
        return n == o.n && img_x == o.img_x && img_z == o.img_z;
    }
    bool operator!=(const CliffordTableau& o) const { return !(*this == o); }
};

/** Symplectic validity: row pairs anticommute, everything else commutes. */
bool tableau_valid(const CliffordTableau& c);

/** C P C† by linearity over the generator images, tracking signs exactly. */
SignedPauli conjugate(const CliffordTableau& c, const SignedPauli& p);

/** Tableau of C2 * C1 (C1 applied first). */
CliffordTableau compose(const CliffordTableau& c2, const CliffordTableau& c1);

CliffordTableau tableau_inverse(const CliffordTableau& c);

/**
 * Deterministic greedy completion of a partial tableau: missing z rows are
 * filled in ascending row order, then missing x rows, each with the lowest
 * PauliIndex candidate (sign +) satisfying the commutation constraints and
 * independence.
 */
CliffordTableau complete_tableau(
    int n, const std::vector<std::pair<int, SignedPauli>>& fixed_z,
    const std::vector<std::pair<int, SignedPauli>>& fixed_x);

/**
 * Coset leaders for row q: one completed tableau per admissible image pair
 * (img_z[q], img_x[q]), i.e. img_z[q] over +-P_n minus +-I and img_x[q] over
 * all anticommuting signed Paulis.  Streams 2*(4^n - 1)*4^n tableaux in a
 * fixed order.
 */
void for_each_coset_leader(int n, int q,
                           const std::function<void(const CliffordTableau&)>& fn);
std::vector<CliffordTableau> enumerate_coset_leaders(int n, int q);

/** Whole Clifford group modulo phase by BFS closure; practical for n <= 2. */
std::vector<CliffordTableau> enumerate_cliffords(int n);

/** A Clifford C with conjugate(C, p) == p2; p, p2 non-identity. */
CliffordTableau find_clifford_mapping(const SignedPauli& p, const SignedPauli& p2);

struct TableauHash {
    std::size_t operator()(const CliffordTableau& c) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        for (const auto& p : c.img_x) mix(p.x | (static_cast<std::uint64_t>(p.z) << 20) |
                                          (static_cast<std::uint64_t>(p.neg) << 40));
        for (const auto& p : c.img_z) mix(p.x | (static_cast<std::uint64_t>(p.z) << 20) |
                                          (static_cast<std::uint64_t>(p.neg) << 40));
        return h;
    }
};

}  // namespace tdsynth
