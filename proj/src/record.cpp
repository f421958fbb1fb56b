#include "hypgrowth/record.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void Record::set(const std::string& key, const std::string& value) {
    for (auto& entry : entries_) {
        if (entry.first == key) {
            entry.second = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void Record::set(const std::string& key, double value) { set(key, format_double(value)); }
void Record::set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
void Record::set(const std::string& key, std::int64_t value) { set(key, std::to_string(value)); }
void Record::set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

bool Record::has(const std::string& key) const {
    for (const auto& entry : entries_)
        if (entry.first == key) return true;
    return false;
}

const std::string& Record::get(const std::string& key) const {
    for (const auto& entry : entries_)
        if (entry.first == key) return entry.second;
    throw InputError("record key not found: " + key);
}

double Record::get_double(const std::string& key) const {
    const std::string& raw = get(key);
    char* end = nullptr;
    double value = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0') throw InputError("record value is not a number: " + key);
    return value;
}

bool Record::get_bool(const std::string& key) const {
    const std::string& raw = get(key);
    if (raw == "true") return true;
    if (raw == "false") return false;
    throw InputError("record value is not a boolean: " + key);
}

std::int64_t Record::get_int(const std::string& key) const {
    const std::string& raw = get(key);
    try {
        std::size_t used = 0;
        std::int64_t value = std::stoll(raw, &used);
        if (used != raw.size()) throw InputError("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw InputError("record value is not an integer: " + key);
    }
}

std::string Record::to_text() const {
    std::string out;
    for (const auto& [key, value] : entries_) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

Record Record::parse(const std::string& text) {
    Record record;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("record line without '=': " + line);
        record.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return record;
}

}  // namespace hypgrowth
