#include "plog/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "plog/error.hpp"

namespace plog {

ZeroOneLp::ZeroOneLp(std::size_t rows, std::vector<std::uint32_t> columns, std::vector<double> rhs)
    : rows_(rows), columns_(std::move(columns)), rhs_(std::move(rhs)) {
  if (rows_ == 0 || rows_ > 32) throw InputError("LP needs between 1 and 32 rows");
  if (rhs_.size() != rows_) throw InputError("LP right-hand side has the wrong length");
  for (double v : rhs_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("LP right-hand side must be finite and non-negative");
  std::uint32_t allowed = rows_ == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << rows_) - 1;
  for (auto c : columns_)
    if (c & ~allowed) throw InputError("LP column touches a row past the last");
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr std::size_t kRefactorEvery = 50;

class Tableau {
 public:
  Tableau(std::size_t m, const std::vector<std::uint32_t>& cols, const std::vector<double>& b)
      : m_(m), n_(cols.size()), cols_(cols), b_(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size())) {
    basis_.resize(m_);
    in_basis_.assign(n_ + m_, false);
    for (std::size_t r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      in_basis_[n_ + r] = true;
    }
    binv_ = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    xb_ = b_;
  }

  // Returns false if the iteration limit was hit; sets unbounded_ on an
  // unbounded ray. `cost` covers structurals; artificials cost `art_cost`.
  bool run(const std::vector<double>& cost, double art_cost, bool phase_one, std::size_t& iters, std::size_t limit) {
    std::vector<double> y(m_);
    for (;;) {
      if (iters >= limit) return false;
      for (std::size_t r = 0; r < m_; ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k)
          s += cost_of(basis_[k], cost, art_cost) * binv_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r));
        y[r] = s;
      }
      std::size_t entering = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        double d = cost[j];
        for (std::uint32_t mask = cols_[j]; mask; mask &= mask - 1) d -= y[static_cast<std::size_t>(__builtin_ctz(mask))];
        if (d < -kCostTol) {
          entering = j;
          break;
        }
      }
      if (entering == n_) return true;

      Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
      for (std::uint32_t mask = cols_[entering]; mask; mask &= mask - 1)
        u += binv_.col(__builtin_ctz(mask));

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        double ur = u(static_cast<Eigen::Index>(r));
        double t;
        if (!phase_one && basis_[r] >= n_ && std::abs(ur) > kPivotTol) {
          t = 0.0;  // a zero-level artificial must not move
        } else if (ur > kPivotTol) {
          t = std::max(0.0, xb_(static_cast<Eigen::Index>(r))) / ur;
        } else {
          continue;
        }
        if (t < best || (t == best && basis_[r] < basis_[leave])) {
          best = t;
          leave = r;
        }
      }
      if (leave == m_) {
        unbounded_ = true;
        return true;
      }
      pivot(leave, entering, u);
      ++iters;
      if (++since_refactor_ >= kRefactorEvery) refactor();
    }
  }

  void refactor() {
    since_refactor_ = 0;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    for (std::size_t k = 0; k < m_; ++k) B.col(static_cast<Eigen::Index>(k)) = column(basis_[k]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
  }

  // Pivots zero-level artificials out where some structural column allows it.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
        for (std::uint32_t mask = cols_[j]; mask; mask &= mask - 1) u += binv_.col(__builtin_ctz(mask));
        if (std::abs(u(static_cast<Eigen::Index>(r))) > 1e-9) {
          pivot(r, j, u);
          break;
        }
      }
    }
  }

  double artificial_sum() const {
    double s = 0.0;
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] >= n_) s += std::max(0.0, xb_(static_cast<Eigen::Index>(r)));
    return s;
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = xb_(static_cast<Eigen::Index>(r));
    return x;
  }

  bool unbounded() const noexcept { return unbounded_; }

 private:
  double cost_of(std::size_t var, const std::vector<double>& cost, double art_cost) const {
    return var < n_ ? cost[var] : art_cost;
  }

  Eigen::VectorXd column(std::size_t var) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    if (var >= n_) {
      c(static_cast<Eigen::Index>(var - n_)) = 1.0;
    } else {
      for (std::uint32_t mask = cols_[var]; mask; mask &= mask - 1) c(__builtin_ctz(mask)) = 1.0;
    }
    return c;
  }

  void pivot(std::size_t r, std::size_t entering, const Eigen::VectorXd& u) {
    const auto R = static_cast<Eigen::Index>(r);
    double t = xb_(R) / u(R);
    xb_ -= t * u;
    xb_(R) = t;
    binv_.row(R) /= u(R);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m_); ++i)
      if (i != R && u(i) != 0.0) binv_.row(i) -= u(i) * binv_.row(R);
    in_basis_[basis_[r]] = false;
    basis_[r] = entering;
    in_basis_[entering] = true;
  }

  std::size_t m_;
  std::size_t n_;
  const std::vector<std::uint32_t>& cols_;
  Eigen::VectorXd b_;
  std::vector<std::size_t> basis_;
  std::vector<bool> in_basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::size_t since_refactor_ = 0;
  bool unbounded_ = false;
};

}  // namespace

LpResult ZeroOneLp::feasibility(double tol) const { return minimize({}, tol); }

LpResult ZeroOneLp::minimize(const std::vector<double>& cost, double tol) const {
  if (!cost.empty() && cost.size() != columns_.size()) throw InputError("LP cost vector has the wrong length");
  LpResult out;
  Tableau tab(rows_, columns_, rhs_);
  std::vector<double> zero(columns_.size(), 0.0);
  if (!tab.run(zero, 1.0, true, out.iterations, iteration_limit)) {
    out.status = LpResult::Status::IterationLimit;
    return out;
  }
  tab.refactor();
  out.infeasibility = tab.artificial_sum();
  if (out.infeasibility > tol) {
    out.status = LpResult::Status::Infeasible;
    return out;
  }
  if (!cost.empty()) {
    tab.drive_out_artificials();
    tab.refactor();
    if (!tab.run(cost, 0.0, false, out.iterations, iteration_limit)) {
      out.status = LpResult::Status::IterationLimit;
      return out;
    }
    if (tab.unbounded()) {
      out.status = LpResult::Status::Unbounded;
      return out;
    }
    tab.refactor();
  }
  out.status = LpResult::Status::Optimal;
  out.x = tab.solution();
  for (std::size_t j = 0; j < out.x.size(); ++j) {
    if (out.x[j] < 0.0 && out.x[j] >= -1e-12) out.x[j] = 0.0;
    if (!cost.empty()) out.objective += cost[j] * out.x[j];
  }
  return out;
}

}  // namespace plog
