#pragma once

#include <vector>

#include "tdsynth/gen_set.hpp"
#include "tdsynth/tableau.hpp"

namespace tdsynth {

/**
 * Factored form <U> = (prod_i <blocks[i]>) * <trailing>; blocks[0] is the
 * leftmost channel factor, so in circuit time order the trailing Clifford
 * runs first.  t_depth_claimed = number of blocks.
 */
struct Decomposition {
    int n = 0;
    std::vector<Block> blocks;
    CliffordTableau trailing;
    int t_depth_claimed = 0;
};

ChannelMatrix decomposition_channel(const Decomposition& d);

/** Exactness gate: re-multiplies the factors and compares entrywise. */
bool decomposition_matches(const Decomposition& d, const ChannelMatrix& a);

/** C B C^dagger: conjugate every unit, folding image signs into flags. */
Block conjugate_block(const CliffordTableau& c, const Block& b);

/**
 * Left-to-right accumulator over an interleaved block/Clifford factor
 * sequence.  Cliffords are pushed right through later blocks by conjugation,
 * leaving prod(blocks) * trailing with the product channel unchanged.
 */
class FactorFold {
  public:
    explicit FactorFold(int n) : n_(n), acc_(CliffordTableau::identity(n)) {}

    void push_block(const Block& b) { blocks_.push_back(conjugate_block(acc_, b)); }
    void push_clifford(const CliffordTableau& c) { acc_ = compose(acc_, c); }

    Decomposition finish() const {
        return Decomposition{n_, blocks_, acc_, static_cast<int>(blocks_.size())};
    }

  private:
    int n_;
    std::vector<Block> blocks_;
    CliffordTableau acc_;
};

}  // namespace tdsynth
