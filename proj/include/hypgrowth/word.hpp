#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hypgrowth {

// One symbol of the symmetric generating alphabet, packed into a byte:
// code = 2 * generator_index + (inverted ? 1 : 0).
struct Letter {
    std::uint8_t code = 0;

    static constexpr Letter make(int generator, bool inverted) {
        return Letter{static_cast<std::uint8_t>(2 * generator + (inverted ? 1 : 0))};
    }
    constexpr int generator() const { return code >> 1; }
    constexpr bool inverted() const { return (code & 1u) != 0; }
    constexpr Letter inverse() const { return Letter{static_cast<std::uint8_t>(code ^ 1u)}; }

    auto operator<=>(const Letter&) const = default;
};

// A word over the alphabet. The empty word represents the identity.
using Word = std::vector<Letter>;
using WordView = std::span<const Letter>;

enum class GroupModel { Free, Surface, FreeAbelian };

// A group model with a fixed symmetric generating set: Free(k), Surface(g)
// with the one-relator presentation < a1,b1,...,ag,bg | prod [ai,bi] >, or
// FreeAbelian(k) as the non-hyperbolic control.
class GroupSpec {
public:
    static GroupSpec free_group(int k);
    static GroupSpec surface_group(int genus);
    static GroupSpec free_abelian(int k);
    // "free:2" | "surface:2" | "abelian:2"
    static GroupSpec parse(const std::string& text);

    GroupModel model() const { return model_; }
    int rank() const { return rank_; }
    int generator_count() const { return generators_; }
    int alphabet_size() const { return 2 * generators_; }
    const std::vector<Word>& relators() const { return relators_; }
    bool hyperbolic() const { return model_ != GroupModel::FreeAbelian; }
    // True when canonical forms are unique per element and geodesic
    // (Free: reduced words; FreeAbelian: sorted normal form).
    bool geodesic_normal_forms() const { return model_ != GroupModel::Surface; }
    std::string text() const;

    bool operator==(const GroupSpec& other) const {
        return model_ == other.model_ && rank_ == other.rank_;
    }

    // Surface only: all cyclic rotations of the relator and of its inverse.
    const std::vector<Word>& relator_rotations() const { return rotations_; }
    int relator_length() const { return relators_.empty() ? 0 : static_cast<int>(relators_[0].size()); }

private:
    GroupSpec(GroupModel model, int rank);

    GroupModel model_;
    int rank_;
    int generators_;
    std::vector<Word> relators_;
    std::vector<Word> rotations_;
};

// --- word primitives -------------------------------------------------------

Word free_reduce(WordView w);
Word invert(WordView u);
Word concat(WordView u, WordView v);

// Model-specific canonical form. Idempotent. For Free the unique reduced
// word, for FreeAbelian the sorted normal form, for Surface a Dehn-reduced
// shortlex-minimal representative (not claimed geodesic, see BallIndex).
Word canonicalize(WordView w, const GroupSpec& spec);
Word multiply(WordView u, WordView v, const GroupSpec& spec);
bool is_identity(WordView w, const GroupSpec& spec);

// Exponent-sum vector per generator; invariant under relator rewrites.
std::vector<int> abelianization_fingerprint(WordView w, const GroupSpec& spec);

bool shortlex_less(WordView a, WordView b);

// Text encoding: generator i as 'a'+i, its inverse as 'A'+i.
std::string to_text(WordView w);
Word word_from_text(const std::string& text, const GroupSpec& spec);

void validate_word(WordView w, const GroupSpec& spec);

}  // namespace hypgrowth
