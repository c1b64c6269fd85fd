#include <doctest.h>

#include <set>
#include <sstream>

#include "xcorr/error.hpp"
#include "xcorr/random.hpp"
#include "xcorr/sequence.hpp"

using namespace xcorr;

TEST_CASE("philox known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("random streams are reproducible and distinct") {
    RandomStream a(42, 3), b(42, 3), c(42, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a(), y = b(), z = c();
        CHECK(x == y);
        differs |= x != z;
    }
    CHECK(differs);

    RandomStream r(1, 0);
    for (int i = 0; i < 10000; ++i) {
        CHECK(r.below(7) < 7);
        const double u = r.uniform();
        CHECK((u >= 0.0 && u < 1.0));
    }
}

TEST_CASE("parse accepts both alphabets") {
    const auto a = parse_sequence("+-+-");
    const auto b = parse_sequence("1011");
    CHECK(a.size() == 4);
    CHECK(a.symbols() == std::vector<int>{1, -1, 1, -1});
    CHECK(b.symbols() == std::vector<int>{1, -1, 1, 1});
    CHECK(parse_sequence("1010") == a);
    CHECK(a == BinarySequence::alternating(4));
    CHECK(parse_sequence("++++") == BinarySequence::all_ones(4));
}

TEST_CASE("parse errors name the position") {
    try {
        parse_sequence("+-x+");
        FAIL("expected throw");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("position 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_sequence("+-01"), InvalidArgument);
    CHECK_THROWS_AS(parse_sequence(""), InvalidArgument);
}

TEST_CASE("format round trip") {
    RandomStream rng(5, 0);
    for (std::size_t n : {1u, 7u, 63u, 64u, 65u, 130u}) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto s = sample_sequence(n, rng);
            CHECK(parse_sequence(format_sequence(s)) == s);
            CHECK(s.negated().negated() == s);
            const auto sym = s.symbols();
            CHECK(BinarySequence(sym) == s);
        }
    }
}

TEST_CASE("window64 matches bits") {
    RandomStream rng(9, 0);
    const auto s = sample_sequence(200, rng);
    for (std::size_t off = 0; off < 200; off += 13) {
        const auto w = s.window64(off);
        for (std::size_t j = 0; j < 64 && off + j < 200; ++j) CHECK(((w >> j) & 1u) == s.bit(off + j));
    }
}

TEST_CASE("sequence files") {
    std::istringstream in("# comment\n\n++--\n+-+-\n");
    const auto seqs = read_sequences(in);
    REQUIRE(seqs.size() == 2);
    CHECK(format_sequence(seqs[0]) == "++--");

    std::ostringstream out;
    write_sequences(out, seqs);
    std::istringstream back(out.str());
    CHECK(read_sequences(back) == seqs);

    // Lengths may differ in a file; families and generators check them.
    std::istringstream ragged("++--\n+-+\n");
    const auto r = read_sequences(ragged);
    CHECK(r.size() == 2);
    CHECK_THROWS_AS(SequenceFamily{r}, InvalidArgument);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(read_sequences(empty), InvalidArgument);
    std::istringstream junk("++--\n+-?-\n");
    try {
        read_sequences(junk);
        FAIL("expected throw");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    const auto fx = read_sequence_file(XCORR_FIXTURES "/pair4.txt");
    REQUIRE(fx.size() == 2);
    CHECK(fx[0] == BinarySequence::all_ones(4));
    CHECK(fx[1] == BinarySequence::alternating(4));
}

TEST_CASE("families reject duplicates, generators allow them") {
    const auto a = parse_sequence("++-");
    CHECK_THROWS_AS(SequenceFamily({a, a}), InvalidArgument);
    CHECK_THROWS_AS(SequenceFamily({a, parse_sequence("++")}), InvalidArgument);
    CHECK_THROWS_AS(SequenceFamily(std::vector<BinarySequence>{}), InvalidArgument);
    const GeneratorSample g({a, a});
    CHECK(g.seed_count() == 2);
    CHECK_FALSE(g.injective());
    CHECK(GeneratorSample({a, a.negated()}).injective());
}

TEST_CASE("sampled families are distinct across seeds") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RandomStream rng(seed, 0);
        const auto fam = sample_family(4, 10, rng);
        std::set<BinarySequence> s(fam.members().begin(), fam.members().end());
        CHECK(s.size() == 10);
    }
    RandomStream rng(0, 0);
    CHECK_NOTHROW(sample_family(3, 8, rng));
    CHECK_THROWS_AS(sample_family(3, 9, rng), InvalidArgument);
}

TEST_CASE("family sampling is uniform") {
    // N = 2, one member: each of the 4 sequences with probability 1/4.
    std::array<int, 4> counts{};
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        RandomStream rng(seed, 0);
        const auto fam = sample_family(2, 1, rng);
        ++counts[fam[0].bit(0) + 2 * fam[0].bit(1)];
    }
    for (int c : counts) CHECK(std::abs(c / 10000.0 - 0.25) <= 0.02);
}

TEST_CASE("sampling is deterministic") {
    RandomStream a(11, 2), b(11, 2);
    const auto f = sample_family(50, 5, a);
    const auto g = sample_family(50, 5, b);
    for (std::size_t i = 0; i < 5; ++i) CHECK(f[i] == g[i]);
    RandomStream c(11, 2), d(11, 2);
    CHECK(sample_generator(20, 6, c).images().size() == 6);
    const auto ga = sample_generator(20, 6, d);
    RandomStream e(11, 2);
    const auto gb = sample_generator(20, 6, e);
    for (std::size_t i = 0; i < 6; ++i) CHECK(ga.image(i) == gb.image(i));
}
