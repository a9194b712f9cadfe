#ifndef RUMOUR_AUTOMATA_H_
#define RUMOUR_AUTOMATA_H_

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "rumour/constants.h"

namespace rumour {

enum class DjBackend { kExact, kAsymptotic };

inline constexpr int kDefaultExactCap = 5000;
inline constexpr int kDefaultHandoverIndex = 2000;

// log(alpha kappa) + j log beta + (j + 1/2) log j, the leading-order
// approximant of log d_j.
double LogDAsymptotic(double j, const ModelConstants& constants);

// The automata numbers d_j defined by d_1 = 1 and
//
//   d_j = j^{2j} / (j-1)! - sum_{i<j} j^{2(j-i)} / (j-i)! * d_i.
//
// The exact backend keeps every d_j as an arbitrary-precision integer. The
// recursion is evaluated over the common denominator (j-1)! and the result is
// required to divide exactly; a remainder throws InvariantError.
//
// The asymptotic backend carries no integers and answers LogD for any j.
class AutomataTable {
 public:
  static AutomataTable ComputeExact(int j_max,
                                    const ModelConstants& constants = DefaultConstants(),
                                    int cap = kDefaultExactCap);
  static AutomataTable Asymptotic(const ModelConstants& constants = DefaultConstants());

  DjBackend backend() const { return backend_; }
  // Largest exactly known index; 0 for the asymptotic backend.
  int j_max() const { return values_.empty() ? 0 : static_cast<int>(values_.size()) - 1; }
  int cap() const { return cap_; }
  const ModelConstants& constants() const { return constants_; }
  bool Covers(std::int64_t j) const { return j >= 1 && j <= j_max(); }

  const mpz_class& value(int j) const;
  double log_value(int j) const;

  // log d_j from the requested backend. kExact needs Covers(j).
  double LogD(std::int64_t j, DjBackend backend) const;
  // Exact where covered, asymptotic beyond.
  double LogDHybrid(std::int64_t j) const;

  // d_j / (alpha kappa beta^j j^{j+1/2}), evaluated in log space.
  double AsymptoticRatio(int j) const;

  // Continues the recursion up to new_j_max (no-op if already covered).
  void ExtendTo(int new_j_max);

 private:
  AutomataTable(DjBackend backend, const ModelConstants& constants, int cap)
      : backend_(backend), constants_(constants), cap_(cap) {}

  DjBackend backend_;
  ModelConstants constants_;
  int cap_;
  std::vector<mpz_class> values_;  // index 0 unused
  std::vector<double> log_values_;
};

// exp(log d_j exact - log d_j asymptotic) - 1 at the handover index.
double HandoverGap(const AutomataTable& table, int index = kDefaultHandoverIndex);

}  // namespace rumour

#endif  // RUMOUR_AUTOMATA_H_
