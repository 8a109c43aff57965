#ifndef TTK_ERRORS_HPP
#define TTK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ttk {

// Bad caller input: out-of-range k, malformed fractions, missing labels, ...
// CLI maps this to exit code 2.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed data file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Exact tie between the k-th and (k+1)-th score; carries the tied value.
class TieError : public std::runtime_error {
 public:
  explicit TieError(double tied_score)
      : std::runtime_error("tied scores at value " + std::to_string(tied_score)),
        tied_score_(tied_score) {}
  double tied_score() const { return tied_score_; }

 private:
  double tied_score_;
};

// Problem exceeds a solver's declared capacity. CLI maps this to exit code 3.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A precondition between modules was violated (e.g. infeasible model handed
// to a routine that requires feasibility).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ttk

#endif  // TTK_ERRORS_HPP
