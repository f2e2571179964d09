#pragma once

#include <stdexcept>
#include <string>

namespace soc {

/* Error taxonomy mirrors the CLI exit codes:
 * validation/dependency -> 3, infeasible -> 2, numerical -> 4. */

struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/* state outside the (non-periodic) grid domain */
struct domain_error : validation_error {
  explicit domain_error(const std::string& what) : validation_error(what) {}
};

/* coverage shrank a target to the empty set, routing has no feasible
 * tour partition, or an initial state has infinite value */
struct infeasible_error : std::runtime_error {
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/* the closed loop reached a cell with no defined action: an abstraction
 * soundness violation, never expected on a synthesized mission */
struct soundness_error : numerical_error {
  explicit soundness_error(const std::string& what) : numerical_error(what) {}
};

/* a pipeline command is missing the artifacts of an upstream command */
struct dependency_error : std::runtime_error {
  explicit dependency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace soc
