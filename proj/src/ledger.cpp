#include "edpdcs/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "edpdcs/errors.hpp"

namespace edpdcs {

BudgetLedger::BudgetLedger(double total) : total_(total) {
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InvalidInput("privacy budget must be positive and finite");
  }
}

void BudgetLedger::charge(std::string phase, double amount) {
  if (!(amount > 0.0)) {
    throw InvalidInput("ledger charge must be positive (phase '" + phase + "')");
  }
  const double next = spent_ + amount;
  if (next > total_ + tolerance()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "budget exhausted: phase '" << phase << "' charges " << amount
        << " with " << spent_ << " of " << total_ << " already spent";
    throw BudgetExhausted(msg.str());
  }
  spent_ = next;
  entries_.push_back({std::move(phase), amount});
}

double BudgetLedger::tolerance() const {
  return kLedgerTolerance * std::max(1.0, total_);
}

bool BudgetLedger::fully_spent() const {
  return std::abs(spent_ - total_) <= tolerance();
}

}  // namespace edpdcs
