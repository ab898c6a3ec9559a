#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdsynth/decomposition.hpp"
#include "tdsynth/matrix.hpp"

namespace tdsynth {

/** Label of one T-depth-1 coset together with a block realizing it. */
struct GenLabel {
    ChannelMatrix label;
    Block witness;
};

/** V_n'' with block witnesses, digest-sorted: the MITM generator alphabet. */
std::vector<GenLabel> vn_dprime_generators(int n);

/**
 * One stored coset: the digest of its canonical label plus a genuine
 * representative channel, rep = product of the witness blocks along the
 * parent chain.  The canonical label matrix itself is not stored because it
 * need not be the channel of any unitary (column sorting can leave the
 * Clifford coset); all arithmetic uses rep, all identification uses digest.
 */
struct DbEntry {
    std::string digest;
    ChannelMatrix rep;
    std::int32_t parent = -1;  // index into the previous level
    std::int32_t gen = -1;     // index into the generator alphabet
};

/**
 * Leveled coset database: levels[0] = {identity}, levels[i] = digest-sorted
 * first-seen dedup of levels[i-1] x generator block products.  Right
 * multiplication is what makes the coset-deduplicated alphabet complete:
 * appending a block to a prefix changes its coset by a conjugated block,
 * which is again a block.  Back-pointers reconstruct the witness blocks.
 */
struct SearchDatabase {
    int n = 0;
    std::vector<std::vector<DbEntry>> levels;

    static SearchDatabase fresh(int n);

    /** Lowest (level, index) with this digest among levels <= max_level. */
    std::optional<std::pair<int, int>> find(const std::string& digest, int max_level) const;
};

/** Appends the next level; throws ResourceError past mem_cap entries. */
void mitm_level_extend(SearchDatabase& db, const std::vector<GenLabel>& gen,
                       std::size_t mem_cap = 0);

void save_database(const SearchDatabase& db, const std::vector<GenLabel>& gen,
                   const std::string& path);
/** Loads and digest-verifies; throws ParseError on any mismatch. */
SearchDatabase load_database(const std::string& path, int expect_n,
                             const std::vector<GenLabel>& gen);

extern const char* const kMitmDbFormat;

struct MitmOptions {
    int max_depth = 3;
    int nesting_c = 2;
    std::size_t mem_cap = 0;                      // entries per level, 0 = unlimited
    int threads = 0;                              // 0 = hardware default
    SearchDatabase* db = nullptr;                 // reused across calls if non-null
    const std::vector<GenLabel>* gens = nullptr;  // prebuilt alphabet
};

/**
 * Provably T-depth-optimal synthesis by nested meet-in-the-middle over coset
 * labels.  Returns the minimum-T-depth decomposition if it is <= max_depth
 * (verified exactly before return), nullopt otherwise.
 */
std::optional<Decomposition> tdepth_mitm(const ChannelMatrix& a, const MitmOptions& opt = {});

/** Factorization of U into depth-1 layers; product equals U exactly. */
struct LayerSeq {
    int depth = 0;
    std::vector<int> layer_indices;
};

/**
 * Generic nested MITM over exact unitaries: returns a minimum-depth layer
 * factorization if depth(u) <= d, nullopt otherwise.  layer_set must be
 * closed under inverse and contain the identity; c >= 2.
 */
std::optional<LayerSeq> nested_mitm_depth(const UMat& u, const std::vector<UMat>& layer_set,
                                          int d, int c);

/** All depth-1 tilings over {1, H, S, Sdg, T, Tdg} wires + CNOTs, n <= 2. */
std::vector<UMat> clifford_t_layer_set(int n);

}  // namespace tdsynth
