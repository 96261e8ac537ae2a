#pragma once

#include <stdexcept>
#include <string>

namespace ordpat {

// Bad data or arguments (CLI exit code 2).
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A limit law was requested outside its regime (CLI exit code 3).
class regime_error : public std::domain_error {
 public:
  explicit regime_error(const std::string& what) : std::domain_error(what) {}
};

// Numerical failure, e.g. a non-positive-definite pivot (CLI exit code 3).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// No closed form for the requested order; callers fall back to the Monte
// Carlo oracle.
class not_closed_form : public std::logic_error {
 public:
  explicit not_closed_form(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ordpat
