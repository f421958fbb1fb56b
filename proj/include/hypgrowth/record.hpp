#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hypgrowth {

// Ordered flat key=value record, the machine-readable output format. Doubles
// are printed with enough digits to round-trip bit-exactly.
class Record {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, double value);
    void set(const std::string& key, bool value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_text() const;
    static Record parse(const std::string& text);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double value);

}  // namespace hypgrowth
