#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hypgrowth/cache.hpp"
#include "hypgrowth/errors.hpp"
#include "hypgrowth/record.hpp"

using namespace hypgrowth;

namespace {
const GroupSpec F2 = GroupSpec::free_group(2);
const GroupSpec S2 = GroupSpec::surface_group(2);

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("hypgrowth-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}
}  // namespace

TEST_CASE("records round trip") {
    Record record;
    record.set("name", "value with spaces");
    record.set("pi", 3.14159265358979323846);
    record.set("count", std::int64_t{42});
    record.set("flag", true);
    const Record parsed = Record::parse(record.to_text());
    CHECK(parsed.get("name") == "value with spaces");
    CHECK(parsed.get_double("pi") == 3.14159265358979323846);  // bit-exact via %.17g
    CHECK(parsed.get_int("count") == 42);
    CHECK(parsed.get_bool("flag"));
    CHECK(parsed.to_text() == record.to_text());
    CHECK_THROWS_AS(parsed.get("missing"), InputError);
    CHECK_THROWS_AS(Record::parse("no separator line"), InputError);
}

TEST_CASE("ball cache round trips byte for byte") {
    for (const GroupSpec& spec : {F2, S2}) {
        const BallIndex index = BallIndex::enumerate(spec, 3);
        const std::string bytes = ball_cache_bytes(index);
        const BallIndex loaded = ball_cache_from_bytes(bytes);
        CHECK(ball_cache_bytes(loaded) == bytes);
        CHECK(loaded.sphere_counts() == index.sphere_counts());
        CHECK(loaded.radius() == index.radius());
        for (std::uint32_t id = 0; id < index.size(); ++id) {
            CHECK(loaded.word(id) == index.word(id));
            CHECK(loaded.parent(id) == index.parent(id));
        }
        // lookups behave identically after a reload
        for (std::uint32_t id = 0; id < index.size(); ++id)
            CHECK(loaded.find(index.word(id)) == id);
    }
}

TEST_CASE("cache refuses foreign or corrupt data") {
    const BallIndex index = BallIndex::enumerate(F2, 2);
    std::string bytes = ball_cache_bytes(index);

    std::string wrong_version = bytes;
    wrong_version[wrong_version.find('1')] = '9';
    CHECK_THROWS_AS(ball_cache_from_bytes(wrong_version), InputError);

    const std::string truncated = bytes.substr(0, bytes.size() / 2);
    CHECK_THROWS_AS(ball_cache_from_bytes(truncated), InputError);

    std::string miscounted = bytes;
    const auto pos = miscounted.find("spheres=1,4");
    miscounted.replace(pos, 11, "spheres=1,5");
    CHECK_THROWS_AS(ball_cache_from_bytes(miscounted), InputError);

    CHECK_THROWS_AS(ball_cache_from_bytes("not a cache\n"), InputError);
}

TEST_CASE("cache files store and load") {
    const auto dir = temp_dir("files");
    const BallIndex index = BallIndex::enumerate(F2, 4);
    const auto file = dir / "f2.ball";
    cache_store(index, file);
    const BallIndex loaded = cache_load(file);
    CHECK(loaded.sphere_counts() == index.sphere_counts());
    CHECK_THROWS_AS(cache_load(dir / "missing.ball"), InputError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("alternative generator caches round trip") {
    std::vector<Word> gens{word_from_text("a", F2), word_from_text("A", F2),
                           word_from_text("ab", F2), word_from_text("BA", F2)};
    const BallIndex index = BallIndex::enumerate(F2, gens, 3);
    const std::string bytes = ball_cache_bytes(index);
    const BallIndex loaded = ball_cache_from_bytes(bytes);
    CHECK(ball_cache_bytes(loaded) == bytes);
    CHECK(loaded.generators().size() == 4);
    CHECK(loaded.sphere_counts() == index.sphere_counts());
}

TEST_CASE("loading a cached ball and extending matches scratch enumeration") {
    for (const GroupSpec& spec : {F2, S2}) {
        const int small = 2, large = 4;
        BallIndex loaded = ball_cache_from_bytes(ball_cache_bytes(BallIndex::enumerate(spec, small)));
        loaded.extend(large);
        const BallIndex fresh = BallIndex::enumerate(spec, large);
        CHECK(ball_cache_bytes(loaded) == ball_cache_bytes(fresh));
    }
}

TEST_CASE("load_or_enumerate reuses and extends cached balls") {
    const auto dir = temp_dir("reuse");

    const BallIndex first = load_or_enumerate(F2, 4, dir.string());
    CHECK(std::filesystem::exists(ball_cache_path(dir, F2, 4)));

    // deeper request: extends the radius-4 cache and stores the result
    const BallIndex deeper = load_or_enumerate(F2, 6, dir.string());
    CHECK(deeper.radius() == 6);
    CHECK(ball_cache_bytes(deeper) == ball_cache_bytes(BallIndex::enumerate(F2, 6)));
    CHECK(std::filesystem::exists(ball_cache_path(dir, F2, 6)));

    // shallower request: truncates the deeper cache
    const BallIndex shallower = load_or_enumerate(F2, 3, dir.string());
    CHECK(shallower.radius() == 3);
    CHECK(ball_cache_bytes(shallower) == ball_cache_bytes(BallIndex::enumerate(F2, 3)));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache directory resolution") {
    CHECK(resolve_cache_dir("explicit") == std::filesystem::path("explicit"));
    ::setenv("HYPGROWTH_CACHE", "/tmp/hypgrowth-env-cache", 1);
    CHECK(resolve_cache_dir("") == std::filesystem::path("/tmp/hypgrowth-env-cache"));
    ::unsetenv("HYPGROWTH_CACHE");
    CHECK_FALSE(resolve_cache_dir("").has_value());
}
