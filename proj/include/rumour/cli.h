#ifndef RUMOUR_CLI_H_
#define RUMOUR_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rumour {

// Malformed command line; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Positive integer count; accepts "1000", "1e6", "2.5e3". UsageError on
// syntax, DomainError on values that are not positive integers.
std::int64_t ParseCount(std::string_view text);

// Comma list ("1e4,1e6") or geometric range "a:b:xf" (a, a f, a f^2, ... <= b;
// the x is optional). The result must be strictly increasing.
std::vector<std::int64_t> ParseNGrid(std::string_view text);

// Arithmetic range "a:b:step", endpoints inclusive up to rounding.
std::vector<double> ParseRealRange(std::string_view text);

// Comma list of reals.
std::vector<double> ParseRealList(std::string_view text);

// args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rumour

#endif  // RUMOUR_CLI_H_
