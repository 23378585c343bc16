#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "circlerev/dynamics.hpp"
#include "circlerev/pl_map.hpp"

namespace circlerev {

struct unsatisfiable_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constraint block for the random map generator.  At most one of rho, word,
// fixed_point_count may be set.
struct GeneratorSpec {
    int degree = 1;
    std::size_t breakpoints = 4;
    std::uint64_t seed = 0;
    std::optional<Rat> rho;               // certified by a constructed periodic orbit
    std::optional<std::string> word;      // e.g. "P+P-" or "A+P-P+"
    std::optional<int> fixed_point_count; // point components with random signs
};

struct GeneratedMap {
    PLMap map;
    std::string certificate;  // construction evidence: orbit or word
};

GeneratedMap random_pl_homeo(const GeneratorSpec& spec);

// Parsed form of a word constraint string.
struct WordPattern {
    std::vector<BlockKind> kinds;
    std::vector<int> signs;
};
WordPattern parse_word_pattern(const std::string& text);

// Map whose signature word realizes the pattern exactly (identity on the
// fixed blocks, tents on the intervals).
PLMap make_word_map(const WordPattern& pattern, std::mt19937_64& rng);

// Random involutions.
PLMap random_preserving_involution(std::mt19937_64& rng);
PLMap random_reversing_involution(std::mt19937_64& rng);

// Random PL homeomorphism with no constraints beyond degree.
PLMap random_homeo(int degree, std::size_t breakpoints, std::mt19937_64& rng);

// Strongly reversible map with rotation number p/q and a nontrivial minimal
// power, built from a rotation-equivariant block with an anti-symmetric
// generator; reversed exactly by a known PL reflection (returned second).
struct ModelPair {
    PLMap map;
    PLMap reverser;
};
ModelPair periodic_reversible_model(long p, long q, std::mt19937_64& rng);

// Orientation reversing map whose square carries a prescribed chiral inner
// sign pattern on one fixed-point gap (mirrored with flipped signs on the
// other), so no sign-preserving reflection of the squared word exists.
PLMap reversing_with_inner_word(const std::vector<int>& inner_signs, std::mt19937_64& rng);

// Uniform random rational in (lo, hi) from a fixed denominator ladder.
Rat random_rational_between(const Rat& lo, const Rat& hi, std::mt19937_64& rng);

}  // namespace circlerev
