#pragma once

#include "opinf/words.hpp"

#include <vector>

namespace opinf {

// Maximal cyclic runs of non-identity letters (the word read around the
// polygon).  A word with full support is a single block equal to itself.
std::vector<Word> cyclic_blocks(const Word& w);

// Maximal runs of non-identity letters reading the word left to right with
// no wraparound (i.e. the blocks of its display string).
std::vector<Word> linear_runs(const Word& w);

// Rename characters by order of first appearance: the first character seen
// becomes 0, the next new one 1, ... (identity positions unchanged).
Word rename_first_appearance(const Word& p);

// Canonical form of a linear pattern under reflection and renaming.
Word chain_canon(const Word& p);

// Public factorization of a word orbit: the cyclic blocks of its canonical
// representative.
std::vector<Word> factorize(const Word& w);

// All trimmed patterns obtained by cutting the cyclic word at every maximal
// identity run of maximum length, in canonical form, sorted and deduplicated.
// Empty when the word has full support or no support.
std::vector<Word> chain_keys(const Word& w);

// Canonical word-orbit representative of a block padded with identities to
// length n.
Word pad_orbit_canon(const Word& block, int n);

} // namespace opinf
