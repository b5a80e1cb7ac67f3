#pragma once

#include <stdexcept>
#include <string>

namespace opsom {

// Raised when an objective evaluation would exceed the run's budget.
class BudgetExceeded : public std::runtime_error {
public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised for configurations and arguments that violate a precondition.
class InvalidArgument : public std::invalid_argument {
public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

class EmptyArchive : public std::runtime_error {
public:
  explicit EmptyArchive(const std::string& what) : std::runtime_error(what) {}
};

class MissingData : public std::runtime_error {
public:
  explicit MissingData(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace opsom
