#pragma once

#include <string>

#include "tdsynth/channel.hpp"

namespace tdsynth {

/**
 * Canonical representative of the right coset W * <Cliffords>:
 *   1. rewrite every entry over the common denominator sqrt2^sde(W),
 *   2. flip each column whose first nonzero numerator (a, b) has a < 0
 *      or a = 0 and b < 0,
 *   3. sort columns (stable) by their numerator sequence, larger first,
 *      entries compared top to bottom by (a, b) lexicographically.
 * Two channels get the same label iff they differ by a right Clifford
 * factor: right multiplication by a signed permutation is exactly a column
 * permutation with sign flips.
 */
ChannelMatrix coset_label(const ChannelMatrix& w);

/** Hex digest of the canonical label serialization (database key). */
std::string label_digest(const ChannelMatrix& label);
std::string coset_digest(const ChannelMatrix& w);

/** Digest algorithm name recorded in database files. */
extern const char* const kLabelDigestAlgo;

/**
 * True iff W and V lie in the same right coset; on success and with witness
 * non-null, stores the Clifford channel C with W = V * C.
 */
bool same_coset(const ChannelMatrix& w, const ChannelMatrix& v,
                ChannelMatrix* witness = nullptr);

}  // namespace tdsynth
