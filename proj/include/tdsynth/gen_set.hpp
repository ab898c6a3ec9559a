#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "tdsynth/channel.hpp"

namespace tdsynth {

/**
 * T-depth-1 unit set: R~(P_i) factors over pairwise commuting, independent
 * unsigned Paulis.  Exactly the sets {C Z_(i) C'} for a common Clifford C,
 * so the product is one parallel T-stage.
 */
struct Block {
    int n = 0;
    std::vector<RpUnit> units;  // canonical: sorted by (pauli, dagger), distinct paulis

    int tcount() const { return static_cast<int>(units.size()); }

    bool operator==(const Block& o) const { return n == o.n && units == o.units; }
    bool operator<(const Block& o) const {
        return units != o.units ? units < o.units : n < o.n;
    }
};

/** Pairwise commuting + GF(2)-independent + distinct Paulis, 1 <= size <= n. */
bool block_valid(int n, const std::vector<RpUnit>& units);

/** Sorts into canonical order and validates; throws ValidationError. */
Block make_block(int n, std::vector<RpUnit> units);

/** Text key "(+XY,T)(+ZZ,Tdg)" of the canonical unit order. */
std::string block_key(const Block& b);

/** Generating set V_n partitioned by block T-count. */
struct GenSet {
    int n = 0;
    std::vector<std::vector<Block>> by_tcount;  // [j-1]: blocks with j units

    std::size_t size() const;
    bool contains(const Block& b) const { return keys.count(block_key(b)) != 0; }
    /** Deterministic flat view: ascending T-count, then canonical key order. */
    std::vector<Block> all() const;

    std::unordered_set<std::string> keys;
};

/**
 * The pruned T-depth-1 generating set V_n.  Deterministic; every block
 * passes block_valid.  |V_1| = 6, |V_2| = 122, |V_3| = 2282.
 */
GenSet build_vn(int n);

/** Crude counting bound 2n * 3^(n-1) * 16^n on |V_n|. */
long long vn_upper_bound(int n);

/** Product of rp_channel over the units (order irrelevant: they commute). */
ChannelMatrix block_channel(const Block& b);

/**
 * True iff the union of the two unit sets is again a valid block: pairwise
 * commuting, independent (duplicate Paulis are dependent), size <= n.
 */
bool can_merge(const Block& b1, const Block& b2);

/** Union block in canonical order; throws ValidationError if !can_merge. */
Block merge_blocks(const Block& b1, const Block& b2);

/**
 * Streams every commuting independent unsigned Pauli subset of size 1..n in
 * ascending lexicographic order (the Pauli support of every valid Block).
 */
void each_valid_pauli_subset(int n,
                             const std::function<void(const std::vector<PauliIndex>&)>& fn);

/**
 * Coset labels of all T-depth-1 block channels (every valid Block over every
 * dagger assignment), deduplicated by label and sorted by digest.  The MITM
 * alphabet V_n''.  Practical for n <= 3.
 */
std::vector<ChannelMatrix> build_vn_dprime(int n);

/**
 * Ground-truth T-depth <= 1 test by brute force over all Cliffords and all
 * T-layers (n <= 2): true iff A = <C (prod T~_(i)) C'> * <C0> for some C,
 * layer (possibly empty), C0.
 */
bool tdepth1_oracle(const ChannelMatrix& a);

/** JSONL cache: header line {format, n, count}, then one block per line. */
void save_genset(const GenSet& g, const std::string& path);
/** Throws ParseError on malformed files, version or parameter mismatch. */
GenSet load_genset(const std::string& path, int expect_n);

extern const char* const kGenSetFormat;

}  // namespace tdsynth
