#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypgrowth/word.hpp"

namespace hypgrowth {

struct EnumerationBudget {
    std::uint64_t max_elements = std::numeric_limits<std::uint64_t>::max();
    double max_seconds = 0.0;  // 0 = unlimited
};

// Exact enumeration of the ball B(R) of a Cayley graph. Elements are stored
// in BFS discovery order, which is shortlex on the stored geodesic words, so
// identical inputs produce bit-identical indexes. Each element keeps its BFS
// parent and the generator step taken from it; the stored geodesic word is
// read off the parent chain.
//
// Equality during enumeration is resolved by canonical forms where those are
// complete invariants (Free, FreeAbelian) and otherwise by abelianization
// fingerprint buckets refined with word-problem checks on quotients.
class BallIndex {
public:
    struct Element {
        std::uint32_t parent;
        std::uint16_t step;    // letter code, or generator index for word generators
        std::uint16_t length;  // word-metric distance from e
    };

    static BallIndex enumerate(const GroupSpec& spec, int radius,
                               const EnumerationBudget& budget = {});
    // Enumerate with respect to an alternative symmetric generating set given
    // as words in the base generators. Lengths are in the new word metric.
    static BallIndex enumerate(const GroupSpec& spec, std::vector<Word> generators, int radius,
                               const EnumerationBudget& budget = {});
    void extend(int new_radius, const EnumerationBudget& budget = {});

    const GroupSpec& spec() const { return spec_; }
    bool standard_generators() const { return generators_.empty(); }
    const std::vector<Word>& generators() const { return generators_; }
    int radius() const { return radius_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(elements_.size()); }

    std::uint32_t sphere_begin(int n) const;
    std::uint32_t sphere_end(int n) const;
    std::uint64_t sphere_count(int n) const;
    std::vector<std::uint64_t> sphere_counts() const;
    std::uint64_t ball_count(int n) const;  // N(n)

    int length(std::uint32_t id) const;
    std::uint32_t parent(std::uint32_t id) const;
    std::uint16_t step(std::uint32_t id) const;
    Word word(std::uint32_t id) const;  // geodesic representative in base letters
    std::uint32_t ancestor(std::uint32_t id, int level) const;

    // Element lookup by any word representing it; nullopt when the element
    // lies outside the enumerated ball.
    std::optional<std::uint32_t> find(WordView w) const;
    // Exact word-metric distance, nullopt when not resolvable at this radius.
    std::optional<int> distance(WordView x, WordView y) const;
    // Threshold query: d(x, y) <= max_dist. Throws CapabilityError when
    // max_dist exceeds the enumerated radius.
    bool distance_leq(WordView x, WordView y, int max_dist) const;

    const std::vector<Element>& elements() const { return elements_; }
    static BallIndex from_elements(const GroupSpec& spec, std::vector<Word> generators, int radius,
                                   std::vector<Element> elements);

private:
    BallIndex(const GroupSpec& spec, std::vector<Word> generators);
    void grow_to(int target_radius, const EnumerationBudget& budget);
    void register_root();
    void rebuild_lookup();
    Word step_word(std::uint16_t s) const;
    int step_count() const;
    std::optional<std::uint32_t> bucket_scan(const Word& canonical) const;
    std::optional<std::uint32_t> free_rank_id(const Word& reduced) const;

    GroupSpec spec_;
    std::vector<Word> generators_;
    int radius_ = -1;
    std::vector<Element> elements_;
    std::vector<std::uint32_t> sphere_offsets_;

    // Lookup structures. Standard Free needs none (ids are computable from
    // reduced words); FreeAbelian uses the canonical map; Surface and word
    // generators additionally use fingerprint buckets.
    bool arithmetic_ids_ = false;
    bool exact_normal_forms_ = false;
    std::unordered_map<std::string, std::uint32_t> canon_lookup_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> fp_buckets_;
};

std::string fingerprint_key(const std::vector<int>& fp);

}  // namespace hypgrowth
