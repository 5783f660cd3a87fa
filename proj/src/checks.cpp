#include "navkit/checks.hpp"

#include <algorithm>
#include <utility>

namespace navkit {

InequalityCheck make_check(std::string name, std::string subject, double lhs, double rhs, bool strict) {
    InequalityCheck c;
    c.name = std::move(name);
    c.subject = std::move(subject);
    c.lhs = lhs;
    c.rhs = rhs;
    c.strict = strict;
    c.pass = strict ? lhs > rhs : lhs >= rhs;
    return c;
}

InequalityCheck not_covered(std::string name, std::string subject, std::string note) {
    InequalityCheck c;
    c.name = std::move(name);
    c.subject = std::move(subject);
    c.applicable = false;
    c.note = std::move(note);
    return c;
}

bool all_pass(const ValidationReport& report) {
    return std::all_of(report.begin(), report.end(), [](const auto& c) { return !c.applicable || c.pass; });
}

}  // namespace navkit
