#pragma once

#include <string>
#include <vector>

namespace navkit {

/// One inequality lhs > rhs (strict) or lhs >= rhs, with its margin.
struct InequalityCheck {
    std::string name;
    std::string subject;  ///< what the check is about, e.g. "obstacle 3"
    double lhs{0.0};
    double rhs{0.0};
    bool strict{true};
    bool applicable{true};
    bool pass{false};
    std::string note;

    double margin() const { return lhs - rhs; }
};

InequalityCheck make_check(std::string name, std::string subject, double lhs, double rhs, bool strict);
InequalityCheck not_covered(std::string name, std::string subject, std::string note);

using ValidationReport = std::vector<InequalityCheck>;

/// True when every applicable check passes.
bool all_pass(const ValidationReport& report);

}  // namespace navkit
