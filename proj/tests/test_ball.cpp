#include <random>

#include "doctest.h"
#include "hypgrowth/ball.hpp"
#include "hypgrowth/errors.hpp"
#include "oracles.hpp"

using namespace hypgrowth;

namespace {
const GroupSpec F2 = GroupSpec::free_group(2);
const GroupSpec S2 = GroupSpec::surface_group(2);
const GroupSpec Z2 = GroupSpec::free_abelian(2);
}  // namespace

TEST_CASE("free ball sphere counts are tree counts") {
    const BallIndex index = BallIndex::enumerate(F2, 3);
    CHECK(index.sphere_counts() == std::vector<std::uint64_t>{1, 4, 12, 36});
    const BallIndex f3 = BallIndex::enumerate(GroupSpec::free_group(3), 3);
    CHECK(f3.sphere_counts() == std::vector<std::uint64_t>{1, 6, 30, 150});
}

TEST_CASE("abelian ball sphere counts are L1 counts") {
    const BallIndex index = BallIndex::enumerate(Z2, 3);
    CHECK(index.sphere_counts() == std::vector<std::uint64_t>{1, 4, 8, 12});
}

TEST_CASE("surface ball matches the pairwise word-problem oracle") {
    const BallIndex index = BallIndex::enumerate(S2, 3);
    const auto oracle = oracle::BallOracle::build(S2, 3);
    CHECK(index.sphere_counts() == oracle.sphere_counts);
    CHECK(index.sphere_counts()[0] == 1);
    CHECK(index.sphere_counts()[1] == 8);
    CHECK(index.sphere_counts()[2] == 56);
    // every stored geodesic word has the oracle's length
    for (std::uint32_t id = 0; id < index.size(); ++id) {
        const std::string text = to_text(index.word(id));
        REQUIRE(oracle.length_of.count(text) == 1);
        CHECK(oracle.length_of.at(text) == index.length(id));
    }
}

TEST_CASE("ball counts are consistent") {
    for (const GroupSpec& spec : {F2, S2, Z2}) {
        const BallIndex index = BallIndex::enumerate(spec, spec == S2 ? 3 : 5);
        std::uint64_t total = 0;
        for (int n = 0; n <= index.radius(); ++n) {
            total += index.sphere_count(n);
            CHECK(index.ball_count(n) == total);
        }
        CHECK(total == index.size());
    }
}

TEST_CASE("parent chain gives geodesic words") {
    for (const GroupSpec& spec : {F2, S2, Z2}) {
        const BallIndex index = BallIndex::enumerate(spec, spec == S2 ? 3 : 4);
        for (std::uint32_t id = 0; id < index.size(); ++id) {
            if (id > 0) CHECK(index.length(index.parent(id)) == index.length(id) - 1);
            const Word w = index.word(id);
            CHECK(static_cast<int>(w.size()) == index.length(id));
            // every prefix is a member at its own length
            for (int t = 0; t <= index.length(id); ++t) {
                const Word prefix(w.begin(), w.begin() + t);
                auto pid = index.find(prefix);
                REQUIRE(pid.has_value());
                CHECK(index.length(*pid) == t);
                CHECK(index.ancestor(id, t) == *pid);
            }
        }
    }
}

TEST_CASE("identity element is a single empty word") {
    const BallIndex index = BallIndex::enumerate(F2, 2);
    CHECK(index.word(0).empty());
    CHECK(index.length(0) == 0);
    CHECK(index.find(Word{}) == 0u);
}

TEST_CASE("enumeration is deterministic") {
    const BallIndex a = BallIndex::enumerate(S2, 3);
    const BallIndex b = BallIndex::enumerate(S2, 3);
    REQUIRE(a.size() == b.size());
    for (std::uint32_t id = 0; id < a.size(); ++id) {
        CHECK(a.parent(id) == b.parent(id));
        CHECK(a.step(id) == b.step(id));
    }
    // spheres come out in shortlex order
    for (int n = 0; n <= a.radius(); ++n) {
        for (std::uint32_t id = a.sphere_begin(n) + 1; id < a.sphere_end(n); ++id)
            CHECK(shortlex_less(a.word(id - 1), a.word(id)));
    }
}

TEST_CASE("find resolves arbitrary spellings") {
    const BallIndex index = BallIndex::enumerate(F2, 4);
    for (std::uint32_t id = 0; id < index.size(); ++id) CHECK(index.find(index.word(id)) == id);
    CHECK(index.find(word_from_text("aA", F2)) == 0u);
    CHECK_FALSE(index.find(word_from_text("aaaaa", F2)).has_value());

    const BallIndex surface = BallIndex::enumerate(S2, 4);
    // two spellings of the same element: half of the relator vs the inverse
    // of the complementary half
    auto first = surface.find(word_from_text("abAB", S2));
    auto second = surface.find(word_from_text("dcDC", S2));
    REQUIRE(first.has_value());
    REQUIRE(second.has_value());
    CHECK(*first == *second);
    CHECK(surface.length(*first) == 4);
}

TEST_CASE("distance queries") {
    const BallIndex index = BallIndex::enumerate(F2, 4);
    CHECK(index.distance_leq(word_from_text("ab", F2), word_from_text("aB", F2), 2));
    CHECK_FALSE(index.distance_leq(word_from_text("ab", F2), word_from_text("ba", F2), 3));
    CHECK(index.distance(word_from_text("ab", F2), word_from_text("ba", F2)) == 4);
    CHECK_THROWS_AS(index.distance_leq(Word{}, Word{}, 5), CapabilityError);

    const BallIndex surface = BallIndex::enumerate(S2, 4);
    CHECK(surface.distance_leq(Word{}, word_from_text("abAB", S2), 4));
    CHECK_FALSE(surface.distance_leq(Word{}, word_from_text("abAB", S2), 3));
}

TEST_CASE("budget errors carry the completed radius") {
    try {
        BallIndex::enumerate(F2, 6, EnumerationBudget{100, 0.0});
        FAIL("expected budget error");
    } catch (const BudgetError& e) {
        CHECK(e.completed_radius() == 3);  // B(3) has 53 elements, B(4) would need 161
    }
}

TEST_CASE("extend matches from-scratch enumeration") {
    for (const GroupSpec& spec : {F2, S2}) {
        BallIndex grown = BallIndex::enumerate(spec, 2);
        grown.extend(4);
        const BallIndex fresh = BallIndex::enumerate(spec, 4);
        REQUIRE(grown.size() == fresh.size());
        CHECK(grown.sphere_counts() == fresh.sphere_counts());
        for (std::uint32_t id = 0; id < grown.size(); ++id) {
            CHECK(grown.parent(id) == fresh.parent(id));
            CHECK(grown.step(id) == fresh.step(id));
        }
    }
}

TEST_CASE("extend after a budget failure leaves the index usable") {
    BallIndex index = BallIndex::enumerate(F2, 2);
    CHECK_THROWS_AS(index.extend(6, EnumerationBudget{30, 0.0}), BudgetError);
    CHECK(index.radius() == 2);  // rolled back cleanly
    index.extend(4);
    CHECK(index.sphere_counts() == std::vector<std::uint64_t>{1, 4, 12, 36, 108});
}

TEST_CASE("alternative generating sets") {
    // the standard letters, spelled as explicit generator words
    std::vector<Word> standard;
    for (int c = 0; c < 4; ++c) standard.push_back(Word{Letter{static_cast<std::uint8_t>(c)}});
    const BallIndex alt = BallIndex::enumerate(F2, standard, 3);
    const BallIndex base = BallIndex::enumerate(F2, 3);
    CHECK(alt.sphere_counts() == base.sphere_counts());

    // {a, a^-1} generates only a line inside F2
    std::vector<Word> line{word_from_text("a", F2), word_from_text("A", F2)};
    const BallIndex partial = BallIndex::enumerate(F2, line, 4);
    CHECK(partial.sphere_counts() == std::vector<std::uint64_t>{1, 2, 2, 2, 2});
    CHECK_FALSE(partial.find(word_from_text("b", F2)).has_value());

    // a richer set reaches b through a detour and changes the metric
    std::vector<Word> rich{word_from_text("a", F2), word_from_text("A", F2),
                           word_from_text("ab", F2), word_from_text("BA", F2)};
    const BallIndex detour = BallIndex::enumerate(F2, rich, 3);
    auto b = detour.find(word_from_text("b", F2));
    REQUIRE(b.has_value());
    CHECK(detour.length(*b) == 2);  // b = a^-1 (ab)
}
