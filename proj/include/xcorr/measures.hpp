#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xcorr/random.hpp"
#include "xcorr/sequence.hpp"

namespace xcorr {

/// A window length plus one (sequence, shift) pair per factor of the product
/// sum. `members[i]` indexes the sequence list the pattern was computed
/// against (family members, generator seeds, or tuple positions) and
/// `shifts[i]` is its shift. Measure witnesses list factors sorted by
/// (member, shift), so each member's shifts form one strictly increasing
/// block.
struct ShiftPattern {
    struct Block {
        std::size_t member;
        std::vector<std::size_t> shifts;
    };

    std::vector<std::size_t> members;
    std::vector<std::size_t> shifts;
    std::size_t window = 0;

    std::size_t order() const noexcept { return shifts.size(); }
    std::vector<Block> blocks() const;

    friend bool operator==(const ShiftPattern&, const ShiftPattern&) = default;
};

struct MeasureResult {
    std::uint64_t value = 0;
    ShiftPattern witness;
    /// Configurations (sequence assignment plus shift tuple) covered by the
    /// search; each covers every admissible window length.
    std::uint64_t evaluated = 0;
    /// True for randomized lower bounds.
    bool approximate = false;
};

struct CountResult {
    std::uint64_t value = 0;
    bool saturated = false;
};

struct MeasureOptions {
    int threads = 0;  // 0: OpenMP default
    std::uint64_t budget = 10'000'000'000ull;
    bool force = false;  // ignore the budget
};

/// Sum over n = 1..window of the product e^{(i)}_{n + d_i}. Requires one
/// shift per sequence, nondecreasing shifts, window >= 1 and
/// window + max shift <= length.
std::int64_t correlation_v(std::span<const BinarySequence> seqs, std::span<const std::size_t> shifts,
                           std::size_t window);

/// Evaluates a pattern against `seqs` (indexed by pattern.members) in any
/// factor order. Throws if the pattern does not fit the sequences.
std::int64_t evaluate_pattern(std::span<const BinarySequence> seqs, const ShiftPattern& pattern);

/// Correlation measure of order k: max |V| over strictly increasing shift
/// tuples and all windows. 2 <= k <= length.
MeasureResult correlation_measure(const BinarySequence& seq, std::size_t k,
                                  const MeasureOptions& opts = {});

/// Max |V| for one ordered k-tuple over nondecreasing shift tuples. Positions
/// holding equal sequences may not share a shift. Witness members are tuple
/// positions.
MeasureResult cross_correlation_k_tuple(std::span<const BinarySequence> tuple, std::size_t k);

/// Cross-correlation measure of order k of a family. Tuples may repeat
/// members. Throws Infeasible when the configuration count exceeds the
/// budget and `force` is unset.
MeasureResult phi(const SequenceFamily& family, std::size_t k, const MeasureOptions& opts = {});

/// Generator variant: blocks of strictly increasing shifts on distinct seeds.
/// For k = 2 a collision short-circuits to the full length.
MeasureResult phi_tilde(const GeneratorSample& gen, std::size_t k, const MeasureOptions& opts = {});

/// Randomized lower bound on phi: the best of `trials` uniformly drawn
/// configurations, each maximized over its window lengths. Reproducible for
/// a given rng state and independent of the thread count.
MeasureResult estimate_phi(const SequenceFamily& family, std::size_t k, std::uint64_t trials,
                           RandomStream& rng, int threads = 0);

/// Randomized lower bound on phi_tilde, sampling over (seed, shift) pairs.
MeasureResult estimate_phi_tilde(const GeneratorSample& gen, std::size_t k, std::uint64_t trials,
                                 RandomStream& rng, int threads = 0);

/// Number of canonical configurations phi enumerates: C(family_size * length, k).
CountResult count_windows(std::size_t length, std::size_t k, std::size_t family_size);

/// Plain single-threaded implementations that walk the definition symbol by
/// symbol. Same value and witness as the optimized versions; kept for tests
/// and benchmarks.
namespace reference {

MeasureResult correlation_measure(const BinarySequence& seq, std::size_t k);
MeasureResult phi(const SequenceFamily& family, std::size_t k);
MeasureResult phi_tilde(const GeneratorSample& gen, std::size_t k);

}  // namespace reference

}  // namespace xcorr
