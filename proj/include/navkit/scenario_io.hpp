#pragma once

#include <stdexcept>
#include <string>

#include "navkit/sim.hpp"

namespace navkit {

/// Parse or validation failure anchored to a line of the scenario file.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& what, int line);
    int line() const { return line_; }

private:
    int line_;
};

/// YAML scenario document. Unknown keys are rejected.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::string& path);

}  // namespace navkit
