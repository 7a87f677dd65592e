#ifndef EDPDCS_LEDGER_HPP
#define EDPDCS_LEDGER_HPP

#include <string>
#include <vector>

namespace edpdcs {

// Slack allowed when comparing accumulated spend against the total. It is
// additive for totals up to 1 and scales with the total above that, so very
// large surrogate budgets survive the rounding of T * (eps / T).
inline constexpr double kLedgerTolerance = 1e-12;

struct LedgerEntry {
  std::string phase;
  double amount = 0.0;
};

// Sequential-composition accountant. Every phase that touches the data
// through a noisy release is charged here; the reduce tasks inside one phase
// work on disjoint clusters and share that phase's charge.
class BudgetLedger {
 public:
  // Throws InvalidInput unless total > 0.
  explicit BudgetLedger(double total);

  // Appends a charge. Throws InvalidInput for a non-positive amount and
  // BudgetExhausted when spent() + amount > total() + tolerance(); the
  // ledger is unchanged on failure.
  void charge(std::string phase, double amount);

  double total() const { return total_; }
  double spent() const { return spent_; }
  double remaining() const { return total_ - spent_; }
  double tolerance() const;
  const std::vector<LedgerEntry>& entries() const { return entries_; }

  // True when the recorded spend equals the total within tolerance.
  bool fully_spent() const;

 private:
  double total_;
  double spent_ = 0.0;
  std::vector<LedgerEntry> entries_;
};

}  // namespace edpdcs

#endif  // EDPDCS_LEDGER_HPP
