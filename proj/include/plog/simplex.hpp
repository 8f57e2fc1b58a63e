#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace plog {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

  Status status = Status::Infeasible;
  std::vector<double> x;      // structural values, empty unless feasible
  double objective = 0.0;
  double infeasibility = 0.0;  // phase-one optimum (sum of artificials)
  std::size_t iterations = 0;
};

// Equality-form LP  min c'x  s.t.  A x = b, x >= 0  where every column of A is
// a 0/1 vector over at most 32 rows, stored as a row bitmask. b must be
// non-negative. Revised simplex with an explicit basis inverse and Bland's
// rule; phase one uses one artificial per row.
class ZeroOneLp {
 public:
  ZeroOneLp(std::size_t rows, std::vector<std::uint32_t> columns, std::vector<double> rhs);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t columns() const noexcept { return columns_.size(); }

  // Phase one only. Feasible iff the artificial sum is at most `tol`.
  LpResult feasibility(double tol = 1e-9) const;
  // Phase one, then minimize `cost` from the feasible basis.
  LpResult minimize(const std::vector<double>& cost, double tol = 1e-9) const;

  std::size_t iteration_limit = 200000;

 private:
  std::size_t rows_;
  std::vector<std::uint32_t> columns_;
  std::vector<double> rhs_;
};

}  // namespace plog
