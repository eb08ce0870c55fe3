#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opinf {

// A word is a sequence over {0,1,2,3}: letters 0,1,2 are the three
// single-output characters (displayed j,k,l) and 3 is the identity
// (displayed 0).  The same container also holds outcome strings, whose
// entries 0..3 are the four outputs (displayed as digits).
using Word = std::vector<std::int8_t>;

inline constexpr std::int8_t kIdentity = 3;

// Character table of the three non-trivial characters on the four outputs:
// kChi[output][character].  Row o is the sign triple attached to output o.
inline constexpr int kChi[4][3] = {
    {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

// --- encoding -------------------------------------------------------------

// Base-4 code with w[0] as the most significant digit, so numeric order on
// codes equals lexicographic order on words.
std::uint32_t encode(const Word& w);
Word decode(std::uint32_t code, int n);

// --- display --------------------------------------------------------------

std::string display(const Word& w);           // letters j,k,l and 0
Word parse_word(const std::string& s);        // inverse of display
std::string outcome_display(const Word& o);   // digits 0..3
Word parse_outcome(const std::string& s);

// --- structure ------------------------------------------------------------

// A word integrates to zero against the uniform output measure unless the
// multiplicities of the three characters are congruent mod 2.
bool is_vanishing(const Word& w);

// Value of the product character of word `w` at outcome `o` (entries in
// {-1,+1}); identity positions contribute a factor 1.
int chi_word(const Word& w, const Word& o);

// --- orbits ---------------------------------------------------------------

// Orbit of a word under cyclic rotation, reflection, and the permutations of
// the three characters (identity fixed).  Sorted ascending.
std::vector<Word> word_orbit(const Word& w);
Word canonical_word(const Word& w);           // lexicographic minimum of the orbit

// Orbit of an outcome string under rotation, reflection, and all 24
// permutations of the four outputs.  Sorted ascending.
std::vector<Word> outcome_orbit(const Word& o);

struct WordOrbits {
  int n = 0;
  std::vector<Word> reps;             // lex-min representatives, ascending
  std::vector<long long> sizes;       // orbit sizes
};

// All orbits of non-vanishing words of length n (the all-identity word is
// excluded; it plays the role of the normalization).
WordOrbits enumerate_word_orbits(int n);

struct OutcomeOrbits {
  int n = 0;
  std::vector<Word> reps;             // lex-min representatives, ascending
  std::vector<long long> sizes;
  std::vector<std::int32_t> orbit_id; // indexed by encode(outcome), size 4^n
};

OutcomeOrbits enumerate_outcome_orbits(int n);

} // namespace opinf
