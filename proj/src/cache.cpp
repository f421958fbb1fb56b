#include "hypgrowth/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

namespace {

constexpr const char* kMagic = "hypgrowth-ball-cache 1";

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

std::string expect_field(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0)
        throw InputError("corrupt ball cache: missing " + key + " header");
    return line.substr(key.size() + 1);
}

}  // namespace

std::string ball_cache_bytes(const BallIndex& index) {
    std::ostringstream out;
    out << kMagic << '\n';
    out << "spec=" << index.spec().text() << '\n';
    if (!index.standard_generators()) {
        out << "generators=";
        for (std::size_t i = 0; i < index.generators().size(); ++i) {
            if (i) out << ',';
            out << to_text(index.generators()[i]);
        }
        out << '\n';
    }
    out << "radius=" << index.radius() << '\n';
    out << "spheres=";
    const auto counts = index.sphere_counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i) out << ',';
        out << counts[i];
    }
    out << '\n';
    out << "elements=" << index.size() << '\n';
    out << "id,word,length,parent\n";
    for (std::uint32_t id = 0; id < index.size(); ++id) {
        out << id << ',' << to_text(index.word(id)) << ',' << index.length(id) << ',';
        if (id == 0)
            out << '-';
        else
            out << index.parent(id);
        out << '\n';
    }
    return out.str();
}

BallIndex ball_cache_from_bytes(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw InputError("unsupported ball cache version or not a cache file");
    GroupSpec spec = GroupSpec::parse(expect_field(in, "spec"));

    std::streampos after_spec = in.tellg();
    std::vector<Word> generators;
    std::vector<std::string> generator_texts;
    if (std::getline(in, line) && line.rfind("generators=", 0) == 0) {
        generator_texts = split(line.substr(11), ',');
        for (const auto& text : generator_texts) generators.push_back(word_from_text(text, spec));
    } else {
        in.clear();
        in.seekg(after_spec);
    }

    int radius = 0;
    try {
        radius = std::stoi(expect_field(in, "radius"));
    } catch (const std::exception&) {
        throw InputError("corrupt ball cache: bad radius");
    }
    const std::string spheres_text = expect_field(in, "spheres");
    std::vector<std::uint64_t> declared;
    for (const auto& part : split(spheres_text, ',')) {
        try {
            declared.push_back(std::stoull(part));
        } catch (const std::exception&) {
            throw InputError("corrupt ball cache: bad sphere counts");
        }
    }
    std::uint64_t element_count = 0;
    try {
        element_count = std::stoull(expect_field(in, "elements"));
    } catch (const std::exception&) {
        throw InputError("corrupt ball cache: bad element count");
    }
    if (!std::getline(in, line) || line != "id,word,length,parent")
        throw InputError("corrupt ball cache: missing column header");

    std::vector<BallIndex::Element> elements;
    elements.reserve(element_count);
    std::vector<std::string> word_texts;
    word_texts.reserve(element_count);

    for (std::uint64_t expected = 0; expected < element_count; ++expected) {
        if (!std::getline(in, line)) throw InputError("corrupt ball cache: truncated element table");
        const auto parts = split(line, ',');
        if (parts.size() != 4) throw InputError("corrupt ball cache: bad element record");
        std::uint64_t id = 0, length = 0;
        try {
            id = std::stoull(parts[0]);
            length = std::stoull(parts[2]);
        } catch (const std::exception&) {
            throw InputError("corrupt ball cache: bad element record");
        }
        if (id != expected) throw InputError("corrupt ball cache: ids out of order");
        const std::string& word_text = parts[1];
        std::uint32_t parent = 0;
        if (expected == 0) {
            if (parts[3] != "-" || !word_text.empty() || length != 0)
                throw InputError("corrupt ball cache: bad identity record");
        } else {
            try {
                parent = static_cast<std::uint32_t>(std::stoul(parts[3]));
            } catch (const std::exception&) {
                throw InputError("corrupt ball cache: bad parent id");
            }
            if (parent >= expected) throw InputError("corrupt ball cache: bad parent id");
        }

        std::uint16_t step = 0;
        if (expected > 0) {
            const std::string& parent_text = word_texts[parent];
            if (word_text.size() <= parent_text.size() ||
                word_text.compare(0, parent_text.size(), parent_text) != 0)
                throw InputError("corrupt ball cache: word does not extend its parent");
            const std::string suffix = word_text.substr(parent_text.size());
            if (generators.empty()) {
                if (suffix.size() != 1) throw InputError("corrupt ball cache: non-letter step");
                Word l = word_from_text(suffix, spec);
                step = l[0].code;
            } else {
                bool found = false;
                for (std::size_t s = 0; s < generator_texts.size(); ++s) {
                    if (generator_texts[s] == suffix) {
                        step = static_cast<std::uint16_t>(s);
                        found = true;
                        break;
                    }
                }
                if (!found) throw InputError("corrupt ball cache: step is not a generator");
            }
        }
        elements.push_back(BallIndex::Element{parent, step, static_cast<std::uint16_t>(length)});
        word_texts.push_back(word_text);
    }

    BallIndex index = BallIndex::from_elements(spec, std::move(generators), radius, std::move(elements));
    if (index.sphere_counts() != declared)
        throw InputError("corrupt ball cache: sphere counts disagree with element table");
    return index;
}

void cache_store(const BallIndex& index, const std::filesystem::path& file) {
    if (!file.parent_path().empty()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write cache file " + file.string());
    out << ball_cache_bytes(index);
}

BallIndex cache_load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read cache file " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ball_cache_from_bytes(buffer.str());
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::string& override_dir) {
    if (!override_dir.empty()) return std::filesystem::path(override_dir);
    if (const char* env = std::getenv("HYPGROWTH_CACHE"); env && *env)
        return std::filesystem::path(env);
    return std::nullopt;
}

namespace {

std::string spec_key(const GroupSpec& spec) {
    std::string key = spec.text();
    for (char& c : key)
        if (c == ':') c = '-';
    return key;
}

}  // namespace

std::filesystem::path ball_cache_path(const std::filesystem::path& dir, const GroupSpec& spec,
                                      int radius) {
    return dir / (spec_key(spec) + "_r" + std::to_string(radius) + ".ball");
}

BallIndex load_or_enumerate(const GroupSpec& spec, int radius, const std::string& cache_dir,
                            const EnumerationBudget& budget) {
    const auto dir = resolve_cache_dir(cache_dir);
    if (!dir) return BallIndex::enumerate(spec, radius, budget);

    // exact or deeper cached ball: reuse, truncated to the requested radius
    int best_deep = -1, best_shallow = -1;
    const std::string prefix = spec_key(spec) + "_r";
    if (std::filesystem::exists(*dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(*dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind(prefix, 0) != 0 || name.size() < prefix.size() + 6) continue;
            if (name.substr(name.size() - 5) != ".ball") continue;
            int r = -1;
            try {
                r = std::stoi(name.substr(prefix.size(), name.size() - prefix.size() - 5));
            } catch (const std::exception&) {
                continue;
            }
            if (r >= radius)
                best_deep = best_deep < 0 ? r : std::min(best_deep, r);
            else
                best_shallow = std::max(best_shallow, r);
        }
    }

    if (best_deep >= 0) {
        BallIndex loaded = cache_load(ball_cache_path(*dir, spec, best_deep));
        if (loaded.radius() == radius) return loaded;
        std::vector<BallIndex::Element> sliced(loaded.elements().begin(),
                                               loaded.elements().begin() + loaded.sphere_end(radius));
        return BallIndex::from_elements(spec, {}, radius, std::move(sliced));
    }
    if (best_shallow >= 0) {
        BallIndex loaded = cache_load(ball_cache_path(*dir, spec, best_shallow));
        loaded.extend(radius, budget);
        cache_store(loaded, ball_cache_path(*dir, spec, radius));
        return loaded;
    }
    BallIndex fresh = BallIndex::enumerate(spec, radius, budget);
    cache_store(fresh, ball_cache_path(*dir, spec, radius));
    return fresh;
}

}  // namespace hypgrowth
