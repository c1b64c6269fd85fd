#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xcorr/random.hpp"

namespace xcorr {

/// A finite sequence over {-1, +1}, stored one bit per symbol.
///
/// Bit i of the packed words holds symbol i (0-based); a set bit encodes -1
/// and a clear bit +1, so a product of symbols corresponds to the XOR of
/// their bits. Bits past the end of the last word are always zero.
class BinarySequence {
  public:
    static constexpr std::size_t kWordBits = 64;

    /// Throws InvalidArgument if empty or if any entry is not +1 or -1.
    explicit BinarySequence(std::span<const int> symbols);

    /// Adopts packed words. Padding bits past `length` are cleared.
    static BinarySequence from_words(std::size_t length, std::vector<std::uint64_t> words);

    static BinarySequence all_ones(std::size_t length);
    static BinarySequence alternating(std::size_t length);  // +1, -1, +1, ...

    std::size_t size() const noexcept { return length_; }
    std::size_t word_count() const noexcept { return words_.size(); }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool bit(std::size_t i) const noexcept {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
    }
    int operator[](std::size_t i) const noexcept { return bit(i) ? -1 : 1; }

    std::vector<int> symbols() const;
    BinarySequence negated() const;

    /// The 64 bits starting at bit `offset`; bits at or past size() read as 0.
    std::uint64_t window64(std::size_t offset) const noexcept;

    friend bool operator==(const BinarySequence&, const BinarySequence&) = default;
    friend std::strong_ordering operator<=>(const BinarySequence& a, const BinarySequence& b);

  private:
    BinarySequence(std::size_t length, std::vector<std::uint64_t> words);

    std::size_t length_;
    std::vector<std::uint64_t> words_;
};

/// A set of pairwise-distinct sequences of one common length, kept in
/// insertion order.
class SequenceFamily {
  public:
    /// Throws InvalidArgument on an empty list, mixed lengths, or duplicates.
    explicit SequenceFamily(std::vector<BinarySequence> members);

    std::size_t length() const noexcept { return members_.front().size(); }
    std::size_t size() const noexcept { return members_.size(); }
    const BinarySequence& operator[](std::size_t i) const noexcept { return members_[i]; }
    std::span<const BinarySequence> members() const noexcept { return members_; }

    bool contains(const BinarySequence& s) const;

  private:
    std::vector<BinarySequence> members_;
};

/// A sequence generator restricted to a finite seed set: seed i maps to
/// image(i). Distinct seeds may share an image.
class GeneratorSample {
  public:
    GeneratorSample(std::vector<std::uint64_t> seeds, std::vector<BinarySequence> images);
    /// Seeds are numbered 0, 1, ... in image order.
    explicit GeneratorSample(std::vector<BinarySequence> images);

    std::size_t length() const noexcept { return images_.front().size(); }
    std::size_t seed_count() const noexcept { return images_.size(); }
    std::span<const std::uint64_t> seeds() const noexcept { return seeds_; }
    std::span<const BinarySequence> images() const noexcept { return images_; }
    const BinarySequence& image(std::size_t i) const noexcept { return images_[i]; }

    bool injective() const;

  private:
    std::vector<std::uint64_t> seeds_;
    std::vector<BinarySequence> images_;
};

/// Accepts "+-" or "10" text ('+'/'1' are +1). Throws InvalidArgument on
/// empty input, a foreign character, or a mix of the two alphabets.
BinarySequence parse_sequence(std::string_view text);

/// Canonical '+'/'-' rendering.
std::string format_sequence(const BinarySequence& seq);

/// Reads a sequence file: one sequence per line; blank lines and lines
/// starting with '#' are skipped. Errors carry the 1-based line number.
std::vector<BinarySequence> read_sequences(std::istream& in);
std::vector<BinarySequence> read_sequence_file(const std::filesystem::path& path);
void write_sequences(std::ostream& out, std::span<const BinarySequence> seqs);

/// Uniform sequence of the given length drawn from `rng`.
BinarySequence sample_sequence(std::size_t length, RandomStream& rng);

/// Uniformly random family of `size` distinct sequences. Duplicates drawn
/// from the iid stream are discarded and redrawn.
SequenceFamily sample_family(std::size_t length, std::size_t size, RandomStream& rng);

/// `seed_count` iid uniform sequences; collisions are kept.
GeneratorSample sample_generator(std::size_t length, std::size_t seed_count, RandomStream& rng);

}  // namespace xcorr
