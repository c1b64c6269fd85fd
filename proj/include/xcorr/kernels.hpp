#pragma once

// Enumeration kernels behind the measures. A configuration is a set of k
// distinct (sequence index, shift) pairs, encoded as pair = index * N + shift
// and listed in increasing order. Configurations are visited in
// lexicographic order of that list; among equal values the first one
// visited (and within it the shortest window) is kept.

#include <cstddef>
#include <cstdint>
#include <span>

#include "xcorr/measures.hpp"
#include "xcorr/sequence.hpp"

namespace xcorr::kernels {

struct WalkMax {
    std::uint64_t value = 0;   // max over M of |sum of the first M steps|
    std::size_t window = 0;    // smallest M attaining it
};

/// Treats each bit as a step (0 -> +1, 1 -> -1) and scans the first
/// `length` steps of `bits`.
WalkMax scan_walk(std::span<const std::uint64_t> bits, std::size_t length) noexcept;

/// Same result, one bit at a time.
WalkMax scan_walk_bitwise(std::span<const std::uint64_t> bits, std::size_t length) noexcept;

/// Word-parallel, OpenMP-parallel maximum over all k-subsets of pairs.
MeasureResult max_over_pair_sets(std::span<const BinarySequence> seqs, std::size_t k, int threads);

/// Serial maximum over all k-subsets of pairs computed from the definition.
MeasureResult max_over_pair_sets_reference(std::span<const BinarySequence> seqs, std::size_t k);

}  // namespace xcorr::kernels
