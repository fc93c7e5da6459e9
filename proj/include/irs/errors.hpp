#pragma once

#include <stdexcept>
#include <string>

namespace irs {

// Instance exceeds a configured compute budget.  Raised instead of silently
// truncating; callers decide whether to skip the cell or abort.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace irs
