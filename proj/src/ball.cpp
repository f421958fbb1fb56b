#include "hypgrowth/ball.hpp"

#include <algorithm>
#include <chrono>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

std::string fingerprint_key(const std::vector<int>& fp) {
    std::string key;
    for (int v : fp) {
        key += std::to_string(v);
        key += ',';
    }
    return key;
}

BallIndex::BallIndex(const GroupSpec& spec, std::vector<Word> generators)
    : spec_(spec), generators_(std::move(generators)) {
    for (const Word& g : generators_) {
        validate_word(g, spec_);
        if (g.empty()) throw InputError("generator words must be nonempty");
    }
    arithmetic_ids_ = generators_.empty() && spec_.model() == GroupModel::Free;
    exact_normal_forms_ = generators_.empty() && spec_.geodesic_normal_forms();
}

int BallIndex::step_count() const {
    return generators_.empty() ? spec_.alphabet_size() : static_cast<int>(generators_.size());
}

Word BallIndex::step_word(std::uint16_t s) const {
    if (generators_.empty()) return Word{Letter{static_cast<std::uint8_t>(s)}};
    return generators_[s];
}

void BallIndex::register_root() {
    elements_.push_back({0, 0, 0});
    sphere_offsets_ = {0, 1};
    radius_ = 0;
    if (!arithmetic_ids_) {
        canon_lookup_.emplace("", 0);
        if (!exact_normal_forms_) fp_buckets_[fingerprint_key(std::vector<int>(spec_.generator_count(), 0))].push_back(0);
    }
}

BallIndex BallIndex::enumerate(const GroupSpec& spec, int radius, const EnumerationBudget& budget) {
    return enumerate(spec, std::vector<Word>{}, radius, budget);
}

BallIndex BallIndex::enumerate(const GroupSpec& spec, std::vector<Word> generators, int radius,
                               const EnumerationBudget& budget) {
    if (radius < 0) throw InputError("radius must be >= 0");
    BallIndex index(spec, std::move(generators));
    index.register_root();
    index.grow_to(radius, budget);
    return index;
}

void BallIndex::extend(int new_radius, const EnumerationBudget& budget) {
    if (new_radius < radius_) throw InputError("extend cannot shrink the radius");
    grow_to(new_radius, budget);
}

void BallIndex::grow_to(int target_radius, const EnumerationBudget& budget) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const int steps = step_count();
    std::uint64_t since_time_check = 0;

    for (int n = radius_; n < target_radius; ++n) {
        const std::uint32_t begin = sphere_offsets_[n];
        const std::uint32_t end = sphere_offsets_[n + 1];
        const std::uint32_t first_new = size();
        // Registrations made while building this sphere, for rollback when
        // the budget trips mid-sphere.
        std::vector<std::string> new_keys;
        std::vector<std::string> new_bucket_keys;

        auto rollback_and_throw = [&](const std::string& what) {
            for (const auto& k : new_keys) canon_lookup_.erase(k);
            for (const auto& k : new_bucket_keys) {
                auto it = fp_buckets_.find(k);
                if (it != fp_buckets_.end()) {
                    it->second.pop_back();
                    if (it->second.empty()) fp_buckets_.erase(it);
                }
            }
            elements_.resize(first_new);
            throw BudgetError(what + " (last completed radius " + std::to_string(n) + ")", n);
        };

        for (std::uint32_t id = begin; id < end; ++id) {
            const Word parent_word = word(id);
            for (int s = 0; s < steps; ++s) {
                if (++since_time_check >= 1024) {
                    since_time_check = 0;
                    if (budget.max_seconds > 0.0 &&
                        std::chrono::duration<double>(Clock::now() - t0).count() > budget.max_seconds)
                        rollback_and_throw("enumeration time budget exceeded");
                }
                Word candidate = concat(parent_word, step_word(static_cast<std::uint16_t>(s)));
                Word canon = canonicalize(candidate, spec_);
                if (exact_normal_forms_) {
                    if (static_cast<int>(canon.size()) != n + 1) continue;
                    if (!arithmetic_ids_) {
                        std::string key = to_text(canon);
                        if (!canon_lookup_.emplace(key, size()).second) continue;
                        new_keys.push_back(std::move(key));
                    }
                } else {
                    std::string key = to_text(canon);
                    auto hit = canon_lookup_.find(key);
                    if (hit != canon_lookup_.end()) continue;
                    if (auto existing = bucket_scan(canon)) {
                        // Same element under a different canonical spelling:
                        // remember the alias so later candidates hit the map.
                        canon_lookup_.emplace(key, *existing);
                        if (*existing >= first_new) new_keys.push_back(std::move(key));
                        continue;
                    }
                    const std::uint32_t nid = size();
                    canon_lookup_.emplace(key, nid);
                    new_keys.push_back(std::move(key));
                    std::string fpk = fingerprint_key(abelianization_fingerprint(canon, spec_));
                    fp_buckets_[fpk].push_back(nid);
                    new_bucket_keys.push_back(std::move(fpk));
                }
                if (size() + 1 > budget.max_elements)
                    rollback_and_throw("enumeration element budget exceeded");
                elements_.push_back({id, static_cast<std::uint16_t>(s), static_cast<std::uint16_t>(n + 1)});
            }
        }
        sphere_offsets_.push_back(size());
        radius_ = n + 1;
    }
}

std::uint32_t BallIndex::sphere_begin(int n) const {
    if (n < 0 || n > radius_) throw CapabilityError("sphere " + std::to_string(n) + " not enumerated");
    return sphere_offsets_[n];
}

std::uint32_t BallIndex::sphere_end(int n) const {
    if (n < 0 || n > radius_) throw CapabilityError("sphere " + std::to_string(n) + " not enumerated");
    return sphere_offsets_[n + 1];
}

std::uint64_t BallIndex::sphere_count(int n) const { return sphere_end(n) - sphere_begin(n); }

std::vector<std::uint64_t> BallIndex::sphere_counts() const {
    std::vector<std::uint64_t> counts;
    counts.reserve(radius_ + 1);
    for (int n = 0; n <= radius_; ++n) counts.push_back(sphere_count(n));
    return counts;
}

std::uint64_t BallIndex::ball_count(int n) const { return sphere_end(n); }

int BallIndex::length(std::uint32_t id) const { return elements_[id].length; }

std::uint32_t BallIndex::parent(std::uint32_t id) const { return elements_[id].parent; }

std::uint16_t BallIndex::step(std::uint32_t id) const { return elements_[id].step; }

Word BallIndex::word(std::uint32_t id) const {
    if (id >= size()) throw InputError("unknown element id");
    std::vector<std::uint16_t> steps;
    steps.reserve(elements_[id].length);
    while (elements_[id].length > 0) {
        steps.push_back(elements_[id].step);
        id = elements_[id].parent;
    }
    Word out;
    if (generators_.empty()) {
        out.reserve(steps.size());
        for (auto it = steps.rbegin(); it != steps.rend(); ++it)
            out.push_back(Letter{static_cast<std::uint8_t>(*it)});
    } else {
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            const Word& g = generators_[*it];
            out.insert(out.end(), g.begin(), g.end());
        }
    }
    return out;
}

std::uint32_t BallIndex::ancestor(std::uint32_t id, int level) const {
    if (id >= size()) throw InputError("unknown element id");
    if (level < 0 || level > length(id)) throw InputError("bad ancestor level");
    while (elements_[id].length > level) id = elements_[id].parent;
    return id;
}

std::optional<std::uint32_t> BallIndex::free_rank_id(const Word& reduced) const {
    const int n = static_cast<int>(reduced.size());
    if (n > radius_) return std::nullopt;
    if (n == 0) return 0u;
    const std::uint64_t base = static_cast<std::uint64_t>(spec_.alphabet_size() - 1);
    std::uint64_t rank = 0;
    std::uint64_t weight = 1;
    for (int i = 1; i < n; ++i) weight *= base;  // fits: ball was enumerable
    rank += static_cast<std::uint64_t>(reduced[0].code) * weight;
    for (int i = 1; i < n; ++i) {
        weight /= base;
        const std::uint8_t barred = reduced[i - 1].inverse().code;
        std::uint64_t r = reduced[i].code;
        if (reduced[i].code > barred) --r;
        rank += r * weight;
    }
    return sphere_offsets_[n] + static_cast<std::uint32_t>(rank);
}

std::optional<std::uint32_t> BallIndex::bucket_scan(const Word& canonical) const {
    auto it = fp_buckets_.find(fingerprint_key(abelianization_fingerprint(canonical, spec_)));
    if (it == fp_buckets_.end()) return std::nullopt;
    const Word inv = invert(canonical);
    for (std::uint32_t id : it->second)
        if (is_identity(concat(inv, word(id)), spec_)) return id;
    return std::nullopt;
}

std::optional<std::uint32_t> BallIndex::find(WordView w) const {
    Word canon = canonicalize(w, spec_);
    if (arithmetic_ids_) return free_rank_id(canon);
    if (exact_normal_forms_) {
        if (static_cast<int>(canon.size()) > radius_) return std::nullopt;
        auto it = canon_lookup_.find(to_text(canon));
        return it == canon_lookup_.end() ? std::nullopt : std::optional<std::uint32_t>(it->second);
    }
    auto it = canon_lookup_.find(to_text(canon));
    if (it != canon_lookup_.end()) return it->second;
    return bucket_scan(canon);
}

std::optional<int> BallIndex::distance(WordView x, WordView y) const {
    Word quotient = multiply(invert(x), y, spec_);
    // Exact normal forms are geodesic, so the distance is simply the length
    // of the quotient's canonical form regardless of the enumerated radius.
    if (exact_normal_forms_ && standard_generators())
        return static_cast<int>(quotient.size());
    auto id = find(quotient);
    if (!id) return std::nullopt;
    return length(*id);
}

bool BallIndex::distance_leq(WordView x, WordView y, int max_dist) const {
    if (max_dist > radius_)
        throw CapabilityError("threshold " + std::to_string(max_dist) + " exceeds enumerated radius " +
                              std::to_string(radius_));
    if (max_dist < 0) return false;
    auto d = distance(x, y);
    return d.has_value() && *d <= max_dist;
}

BallIndex BallIndex::from_elements(const GroupSpec& spec, std::vector<Word> generators, int radius,
                                   std::vector<Element> elements) {
    if (elements.empty() || elements[0].length != 0)
        throw InputError("element table must start with the identity");
    if (radius < 0) throw InputError("radius must be >= 0");
    BallIndex index(spec, std::move(generators));
    index.elements_ = std::move(elements);
    index.sphere_offsets_ = {0};
    int current = 0;
    for (std::uint32_t id = 0; id < index.size(); ++id) {
        const auto& el = index.elements_[id];
        if (el.length == current + 1) {
            index.sphere_offsets_.push_back(id);
            ++current;
        } else if (el.length != current) {
            throw InputError("element lengths out of order in table");
        }
        if (el.length > 0 && (el.parent >= id || index.elements_[el.parent].length != el.length - 1))
            throw InputError("bad parent reference in element table");
    }
    if (current > radius) throw InputError("element lengths exceed the declared radius");
    while (static_cast<int>(index.sphere_offsets_.size()) < radius + 1)
        index.sphere_offsets_.push_back(index.size());
    index.sphere_offsets_.push_back(index.size());
    index.radius_ = radius;
    index.rebuild_lookup();
    return index;
}

void BallIndex::rebuild_lookup() {
    if (arithmetic_ids_) return;
    canon_lookup_.clear();
    fp_buckets_.clear();
    for (std::uint32_t id = 0; id < size(); ++id) {
        Word canon = canonicalize(word(id), spec_);
        canon_lookup_.emplace(to_text(canon), id);
        if (!exact_normal_forms_)
            fp_buckets_[fingerprint_key(abelianization_fingerprint(canon, spec_))].push_back(id);
    }
}

}  // namespace hypgrowth
