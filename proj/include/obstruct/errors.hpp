#ifndef OBSTRUCT_ERRORS_HPP
#define OBSTRUCT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace obstruct {

// Malformed input: bad word, bad number, bad file, violated precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A query reached beyond the length up to which a truncated presentation is
// certified. Carries the certified bound.
class HorizonExceeded : public std::runtime_error {
 public:
  HorizonExceeded(const std::string& what, std::size_t bound)
      : std::runtime_error(what + " (certified only up to length " + std::to_string(bound) + ")"),
        bound_(bound) {}
  std::size_t bound() const { return bound_; }

 private:
  std::size_t bound_;
};

// An enumeration or search would exceed its configured cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace obstruct

#endif  // OBSTRUCT_ERRORS_HPP
