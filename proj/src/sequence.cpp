#include "xcorr/sequence.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <numeric>
#include <set>

#include "xcorr/error.hpp"

namespace xcorr {

namespace {

constexpr std::size_t kW = BinarySequence::kWordBits;

std::size_t words_for(std::size_t length) { return (length + kW - 1) / kW; }

}  // namespace

BinarySequence::BinarySequence(std::size_t length, std::vector<std::uint64_t> words)
    : length_(length), words_(std::move(words)) {}

BinarySequence::BinarySequence(std::span<const int> symbols)
    : length_(symbols.size()), words_(words_for(symbols.size()), 0) {
    if (symbols.empty()) throw InvalidArgument("binary sequence must be nonempty");
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] == -1) {
            words_[i / kW] |= std::uint64_t{1} << (i % kW);
        } else if (symbols[i] != 1) {
            throw InvalidArgument("sequence entry " + std::to_string(i) + " is not +1 or -1");
        }
    }
}

BinarySequence BinarySequence::from_words(std::size_t length, std::vector<std::uint64_t> words) {
    if (length == 0) throw InvalidArgument("binary sequence must be nonempty");
    if (words.size() != words_for(length)) throw InvalidArgument("word count does not match length");
    if (length % kW != 0) words.back() &= (std::uint64_t{1} << (length % kW)) - 1;
    return BinarySequence(length, std::move(words));
}

BinarySequence BinarySequence::all_ones(std::size_t length) {
    return from_words(length, std::vector<std::uint64_t>(words_for(length), 0));
}

BinarySequence BinarySequence::alternating(std::size_t length) {
    // -1 at odd positions
    return from_words(length, std::vector<std::uint64_t>(words_for(length), 0xAAAAAAAAAAAAAAAAull));
}

std::vector<int> BinarySequence::symbols() const {
    std::vector<int> out(length_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = (*this)[i];
    return out;
}

BinarySequence BinarySequence::negated() const {
    std::vector<std::uint64_t> w(words_);
    for (auto& x : w) x = ~x;
    return from_words(length_, std::move(w));
}

std::uint64_t BinarySequence::window64(std::size_t offset) const noexcept {
    const std::size_t idx = offset / kW;
    const std::size_t sh = offset % kW;
    if (idx >= words_.size()) return 0;
    std::uint64_t lo = words_[idx] >> sh;
    if (sh != 0 && idx + 1 < words_.size()) lo |= words_[idx + 1] << (kW - sh);
    return lo;
}

std::strong_ordering operator<=>(const BinarySequence& a, const BinarySequence& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(),
                                                  b.words_.begin(), b.words_.end());
}

SequenceFamily::SequenceFamily(std::vector<BinarySequence> members) : members_(std::move(members)) {
    if (members_.empty()) throw InvalidArgument("family must contain at least one sequence");
    const std::size_t n = members_.front().size();
    std::set<BinarySequence> seen;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i].size() != n)
            throw InvalidArgument("family member " + std::to_string(i) + " has length " +
                                  std::to_string(members_[i].size()) + ", expected " +
                                  std::to_string(n));
        if (!seen.insert(members_[i]).second)
            throw InvalidArgument("family member " + std::to_string(i) + " duplicates an earlier member");
    }
}

bool SequenceFamily::contains(const BinarySequence& s) const {
    return std::find(members_.begin(), members_.end(), s) != members_.end();
}

GeneratorSample::GeneratorSample(std::vector<std::uint64_t> seeds, std::vector<BinarySequence> images)
    : seeds_(std::move(seeds)), images_(std::move(images)) {
    if (images_.empty()) throw InvalidArgument("generator needs at least one seed");
    if (seeds_.size() != images_.size())
        throw InvalidArgument("generator needs exactly one image per seed");
    if (std::set<std::uint64_t>(seeds_.begin(), seeds_.end()).size() != seeds_.size())
        throw InvalidArgument("generator seeds must be distinct");
    const std::size_t n = images_.front().size();
    for (const auto& s : images_)
        if (s.size() != n) throw InvalidArgument("generator images differ in length");
}

namespace {
std::vector<std::uint64_t> iota_ids(std::size_t n) {
    std::vector<std::uint64_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}
}  // namespace

// seeds_ is declared before images_, so it is initialized from the intact vector.
GeneratorSample::GeneratorSample(std::vector<BinarySequence> images)
    : seeds_(iota_ids(images.size())), images_(std::move(images)) {
    if (images_.empty()) throw InvalidArgument("generator needs at least one seed");
    const std::size_t n = images_.front().size();
    for (const auto& s : images_)
        if (s.size() != n) throw InvalidArgument("generator images differ in length");
}

bool GeneratorSample::injective() const {
    std::set<BinarySequence> seen;
    for (const auto& s : images_)
        if (!seen.insert(s).second) return false;
    return true;
}

BinarySequence parse_sequence(std::string_view text) {
    if (text.empty()) throw InvalidArgument("empty sequence");
    enum class Alphabet { unknown, sign, digit } alphabet = Alphabet::unknown;
    std::vector<int> symbols;
    symbols.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        Alphabet a;
        int v;
        switch (c) {
            case '+': a = Alphabet::sign, v = 1; break;
            case '-': a = Alphabet::sign, v = -1; break;
            case '1': a = Alphabet::digit, v = 1; break;
            case '0': a = Alphabet::digit, v = -1; break;
            default:
                throw InvalidArgument("invalid character at position " + std::to_string(i + 1));
        }
        if (alphabet == Alphabet::unknown) alphabet = a;
        if (a != alphabet)
            throw InvalidArgument("mixed alphabets at position " + std::to_string(i + 1));
        symbols.push_back(v);
    }
    return BinarySequence(symbols);
}

std::string format_sequence(const BinarySequence& seq) {
    std::string out(seq.size(), '+');
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq.bit(i)) out[i] = '-';
    return out;
}

std::vector<BinarySequence> read_sequences(std::istream& in) {
    std::vector<BinarySequence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        try {
            out.push_back(parse_sequence(line));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (out.empty()) throw InvalidArgument("no sequences in input");
    return out;
}

std::vector<BinarySequence> read_sequence_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    return read_sequences(in);
}

void write_sequences(std::ostream& out, std::span<const BinarySequence> seqs) {
    for (const auto& s : seqs) out << format_sequence(s) << '\n';
}

BinarySequence sample_sequence(std::size_t length, RandomStream& rng) {
    if (length == 0) throw InvalidArgument("length must be positive");
    std::vector<std::uint64_t> words(words_for(length));
    for (auto& w : words) w = rng();
    return BinarySequence::from_words(length, std::move(words));
}

SequenceFamily sample_family(std::size_t length, std::size_t size, RandomStream& rng) {
    if (length == 0) throw InvalidArgument("length must be positive");
    if (size == 0) throw InvalidArgument("family size must be positive");
    if (length < 63 ? size > (std::size_t{1} << length) : size > (std::size_t{1} << 62))
        throw InvalidArgument("family size " + std::to_string(size) + " exceeds 2^" +
                              std::to_string(length));
    std::vector<BinarySequence> members;
    members.reserve(size);
    std::set<BinarySequence> seen;
    while (members.size() < size) {
        auto s = sample_sequence(length, rng);
        if (seen.insert(s).second) members.push_back(std::move(s));
    }
    return SequenceFamily(std::move(members));
}

GeneratorSample sample_generator(std::size_t length, std::size_t seed_count, RandomStream& rng) {
    if (seed_count == 0) throw InvalidArgument("seed count must be positive");
    std::vector<BinarySequence> images;
    images.reserve(seed_count);
    for (std::size_t i = 0; i < seed_count; ++i) images.push_back(sample_sequence(length, rng));
    return GeneratorSample(std::move(images));
}

}  // namespace xcorr
