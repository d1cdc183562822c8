#pragma once

#include <string>
#include <vector>

namespace fusion {

/// A checked inequality lhs <= rhs. slack = rhs - lhs; pass iff slack >= -tol.
///
/// `proven` is false for inequalities reported for comparison only (their
/// constants are not valid in general), so callers can keep them out of a
/// pass/fail decision.
struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  bool proven = true;
};

inline Inequality check_le(std::string name, double lhs, double rhs, double tol, bool proven = true) {
  Inequality q{std::move(name), lhs, rhs, rhs - lhs, false, proven};
  q.pass = q.slack >= -tol;
  return q;
}

/// All proven inequalities pass.
inline bool all_pass(const std::vector<Inequality>& qs) {
  for (const auto& q : qs) {
    if (q.proven && !q.pass) return false;
  }
  return true;
}

}  // namespace fusion
