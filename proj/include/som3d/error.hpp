#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace som3d {

/// Raised when a scenario, configuration, or argument violates a documented
/// constraint. Carries every violation found, not just the first.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::string message)
        : std::invalid_argument(message), problems_{std::move(message)} {}

    explicit ValidationError(std::vector<std::string> problems)
        : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& item : items) {
            if (!out.empty()) out += "; ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

}  // namespace som3d
