#ifndef RUMOUR_ERRORS_H_
#define RUMOUR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rumour {

// Bad argument for a well-formed call: out-of-support index, value outside a
// function's domain, and so on. The CLI maps it to exit code 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured resource cap (table size, backend limit) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& backend, const std::string& what)
      : std::runtime_error(backend + ": " + what), backend_(backend) {}
  const std::string& backend() const { return backend_; }

 private:
  std::string backend_;
};

// An internal invariant failed. Always a bug, never a user error.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rumour

#endif  // RUMOUR_ERRORS_H_
