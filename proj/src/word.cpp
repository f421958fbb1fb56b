#include "hypgrowth/word.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

namespace {

Word commutator(int i, int j) {
    Word w;
    w.push_back(Letter::make(i, false));
    w.push_back(Letter::make(j, false));
    w.push_back(Letter::make(i, true));
    w.push_back(Letter::make(j, true));
    return w;
}

}  // namespace

GroupSpec::GroupSpec(GroupModel model, int rank) : model_(model), rank_(rank) {
    switch (model) {
        case GroupModel::Free:
            generators_ = rank;
            break;
        case GroupModel::Surface: {
            generators_ = 2 * rank;
            Word relator;
            for (int i = 0; i < rank; ++i) {
                Word c = commutator(2 * i, 2 * i + 1);
                relator.insert(relator.end(), c.begin(), c.end());
            }
            relators_.push_back(relator);
            Word inv = invert(relator);
            for (std::size_t s = 0; s < relator.size(); ++s) {
                Word rot(relator.begin() + s, relator.end());
                rot.insert(rot.end(), relator.begin(), relator.begin() + s);
                rotations_.push_back(std::move(rot));
                Word irot(inv.begin() + s, inv.end());
                irot.insert(irot.end(), inv.begin(), inv.begin() + s);
                rotations_.push_back(std::move(irot));
            }
            break;
        }
        case GroupModel::FreeAbelian:
            generators_ = rank;
            for (int i = 0; i < rank; ++i)
                for (int j = i + 1; j < rank; ++j) relators_.push_back(commutator(i, j));
            break;
    }
    if (generators_ > 26) throw InputError("at most 26 generator symbols supported");
}

GroupSpec GroupSpec::free_group(int k) {
    if (k < 1) throw InputError("free group rank must be >= 1");
    return GroupSpec(GroupModel::Free, k);
}

GroupSpec GroupSpec::surface_group(int genus) {
    if (genus < 2) throw InputError("surface group genus must be >= 2");
    return GroupSpec(GroupModel::Surface, genus);
}

GroupSpec GroupSpec::free_abelian(int k) {
    if (k < 1) throw InputError("free abelian rank must be >= 1");
    return GroupSpec(GroupModel::FreeAbelian, k);
}

GroupSpec GroupSpec::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw InputError("group spec must look like free:2, surface:2, abelian:2");
    std::string name = text.substr(0, colon);
    int value = 0;
    try {
        std::size_t used = 0;
        value = std::stoi(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw InputError("trailing characters in group spec");
    } catch (const std::exception&) {
        throw InputError("bad rank in group spec: " + text);
    }
    if (name == "free") return free_group(value);
    if (name == "surface") return surface_group(value);
    if (name == "abelian") return free_abelian(value);
    throw InputError("unknown group model: " + name);
}

std::string GroupSpec::text() const {
    switch (model_) {
        case GroupModel::Free: return "free:" + std::to_string(rank_);
        case GroupModel::Surface: return "surface:" + std::to_string(rank_);
        case GroupModel::FreeAbelian: return "abelian:" + std::to_string(rank_);
    }
    return {};
}

void validate_word(WordView w, const GroupSpec& spec) {
    for (Letter l : w)
        if (l.generator() >= spec.generator_count())
            throw InputError("letter out of alphabet range for " + spec.text());
}

Word free_reduce(WordView w) {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) {
        if (!out.empty() && out.back() == l.inverse())
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

Word invert(WordView u) {
    Word out;
    out.reserve(u.size());
    for (auto it = u.rbegin(); it != u.rend(); ++it) out.push_back(it->inverse());
    return out;
}

Word concat(WordView u, WordView v) {
    Word out;
    out.reserve(u.size() + v.size());
    out.insert(out.end(), u.begin(), u.end());
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

bool shortlex_less(WordView a, WordView b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

// rotations grouped by their first letter code, computed once per spec
const std::vector<std::vector<const Word*>>& rotations_by_first(const GroupSpec& spec) {
    thread_local std::vector<std::vector<const Word*>> table;
    thread_local const void* cached_for = nullptr;
    if (cached_for != static_cast<const void*>(&spec.relator_rotations())) {
        table.assign(spec.alphabet_size(), {});
        for (const Word& rot : spec.relator_rotations()) table[rot[0].code].push_back(&rot);
        cached_for = &spec.relator_rotations();
    }
    return table;
}

// Finds a subword of w matching a prefix of some relator rotation with
// length > half the relator, and replaces it by the inverse of the rotation
// remainder (strictly shorter). Returns true if a replacement happened.
bool dehn_step(Word& w, const GroupSpec& spec) {
    const int rlen = spec.relator_length();
    const int half = rlen / 2;
    if (static_cast<int>(w.size()) <= half) return false;
    const auto& by_first = rotations_by_first(spec);
    for (int pos = 0; pos + half < static_cast<int>(w.size()); ++pos) {
        for (const Word* rot : by_first[w[pos].code]) {
            int len = 1;
            const int cap = std::min<int>(rlen, static_cast<int>(w.size()) - pos);
            while (len < cap && (*rot)[len] == w[pos + len]) ++len;
            if (len <= half) continue;
            Word tail(rot->begin() + len, rot->end());
            Word replacement = invert(tail);
            Word next(w.begin(), w.begin() + pos);
            next.insert(next.end(), replacement.begin(), replacement.end());
            next.insert(next.end(), w.begin() + pos + len, w.end());
            w = free_reduce(next);
            return true;
        }
    }
    return false;
}

Word dehn_reduce(Word w, const GroupSpec& spec) {
    w = free_reduce(w);
    while (dehn_step(w, spec)) {
    }
    return w;
}

bool has_half_match(const Word& w, const GroupSpec& spec) {
    const int half = spec.relator_length() / 2;
    if (static_cast<int>(w.size()) < half) return false;
    const auto& by_first = rotations_by_first(spec);
    for (int pos = 0; pos + half <= static_cast<int>(w.size()); ++pos)
        for (const Word* rot : by_first[w[pos].code])
            if (std::equal(rot->begin(), rot->begin() + half, w.begin() + pos)) return true;
    return false;
}

// All words reachable from w by half-relator swaps that preserve length.
// If any swap exposes a shorter representative the search restarts from it.
Word surface_canonical(Word w, const GroupSpec& spec) {
    const int half = spec.relator_length() / 2;
    w = dehn_reduce(std::move(w), spec);
    const auto& by_first = rotations_by_first(spec);
    for (;;) {
        if (!has_half_match(w, spec)) return w;
        std::set<Word> seen;
        std::vector<Word> frontier{w};
        seen.insert(w);
        Word best = w;
        bool restarted = false;
        while (!frontier.empty() && !restarted) {
            Word cur = std::move(frontier.back());
            frontier.pop_back();
            for (int pos = 0; pos + half <= static_cast<int>(cur.size()) && !restarted; ++pos) {
                for (const Word* rot : by_first[cur[pos].code]) {
                    if (!std::equal(rot->begin(), rot->begin() + half, cur.begin() + pos)) continue;
                    Word tail(rot->begin() + half, rot->end());
                    Word replacement = invert(tail);
                    Word next(cur.begin(), cur.begin() + pos);
                    next.insert(next.end(), replacement.begin(), replacement.end());
                    next.insert(next.end(), cur.begin() + pos + half, cur.end());
                    next = free_reduce(next);
                    if (next.size() < cur.size()) {
                        w = dehn_reduce(std::move(next), spec);
                        restarted = true;
                        break;
                    }
                    Word reduced = dehn_reduce(next, spec);
                    if (reduced.size() < next.size()) {
                        w = std::move(reduced);
                        restarted = true;
                        break;
                    }
                    if (seen.insert(next).second) {
                        if (shortlex_less(next, best)) best = next;
                        frontier.push_back(std::move(next));
                    }
                }
            }
        }
        if (!restarted) return best;
    }
}

Word abelian_canonical(WordView w, const GroupSpec& spec) {
    std::vector<int> exponents(spec.generator_count(), 0);
    for (Letter l : w) exponents[l.generator()] += l.inverted() ? -1 : 1;
    Word out;
    for (int g = 0; g < spec.generator_count(); ++g) {
        int e = exponents[g];
        for (int i = 0; i < std::abs(e); ++i) out.push_back(Letter::make(g, e < 0));
    }
    return out;
}

}  // namespace

Word canonicalize(WordView w, const GroupSpec& spec) {
    validate_word(w, spec);
    switch (spec.model()) {
        case GroupModel::Free: return free_reduce(w);
        case GroupModel::FreeAbelian: return abelian_canonical(w, spec);
        case GroupModel::Surface: return surface_canonical(Word(w.begin(), w.end()), spec);
    }
    return {};
}

Word multiply(WordView u, WordView v, const GroupSpec& spec) {
    return canonicalize(concat(u, v), spec);
}

bool is_identity(WordView w, const GroupSpec& spec) {
    validate_word(w, spec);
    switch (spec.model()) {
        case GroupModel::Free: return free_reduce(w).empty();
        case GroupModel::FreeAbelian: return abelian_canonical(w, spec).empty();
        case GroupModel::Surface: return dehn_reduce(Word(w.begin(), w.end()), spec).empty();
    }
    return false;
}

std::vector<int> abelianization_fingerprint(WordView w, const GroupSpec& spec) {
    validate_word(w, spec);
    std::vector<int> exponents(spec.generator_count(), 0);
    for (Letter l : w) exponents[l.generator()] += l.inverted() ? -1 : 1;
    return exponents;
}

std::string to_text(WordView w) {
    std::string out;
    out.reserve(w.size());
    for (Letter l : w) out.push_back(static_cast<char>((l.inverted() ? 'A' : 'a') + l.generator()));
    return out;
}

Word word_from_text(const std::string& text, const GroupSpec& spec) {
    Word out;
    out.reserve(text.size());
    for (char c : text) {
        if (c >= 'a' && c <= 'z')
            out.push_back(Letter::make(c - 'a', false));
        else if (c >= 'A' && c <= 'Z')
            out.push_back(Letter::make(c - 'A', true));
        else
            throw InputError(std::string("bad character in word text: '") + c + "'");
    }
    validate_word(out, spec);
    return out;
}

}  // namespace hypgrowth
