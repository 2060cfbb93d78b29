#pragma once

#include "ncwb/rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ncwb {

/// One failed instance of an identity, with the basis indices that witness it.
struct Violation {
    std::string law;                   // short stable key, e.g. "leibniz", "cartan.leibniz"
    std::vector<std::size_t> indices;  // basis indices in the order named by `where`
    std::string where;                 // human-readable witness, e.g. "f=x, g=x"
    Vector defect;                     // right-hand side minus left-hand side, when meaningful
};

/// Result of an axiom checker. Empty means the structure is valid.
struct Report {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::size_t size() const { return violations.size(); }

    void add(std::string law, std::vector<std::size_t> indices, std::string where, Vector defect = {}) {
        violations.push_back({std::move(law), std::move(indices), std::move(where), std::move(defect)});
    }

    void append(const Report& other) {
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }

    [[nodiscard]] std::size_t count(const std::string& law) const {
        std::size_t n = 0;
        for (const auto& v : violations) {
            n += v.law == law ? 1 : 0;
        }
        return n;
    }
};

/// Thrown when a structure fails validation at construction time.
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& what, Report report)
        : std::runtime_error(what), report_(std::move(report)) {}
    [[nodiscard]] const Report& report() const { return report_; }

private:
    Report report_;
};

}  // namespace ncwb
