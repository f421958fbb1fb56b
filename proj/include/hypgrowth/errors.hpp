#pragma once

#include <stdexcept>
#include <string>

namespace hypgrowth {

// Bad caller input: malformed words, out-of-range parameters, corrupt files.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// The request cannot be answered with the data at hand (e.g. a distance
// query beyond the enumerated radius). Enumerating deeper may fix it.
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Resource budget exhausted mid-enumeration. Carries the last radius whose
// sphere was fully enumerated before the budget tripped.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, int completed_radius)
        : std::runtime_error(what), completed_radius_(completed_radius) {}
    int completed_radius() const { return completed_radius_; }

private:
    int completed_radius_;
};

}  // namespace hypgrowth
