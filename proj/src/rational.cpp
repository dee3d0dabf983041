#include "segalis/rational.hpp"

#include <cstddef>
#include <utility>

#include "segalis/error.hpp"

namespace segalis {

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(m[pivot][col]) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(m[r][col]) == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return det;
}

namespace {

// Dense tableau: rows_ are constraints with the right-hand side in the last
// column; basis_[r] is the basic variable of row r.
class Tableau {
 public:
  Tableau(std::vector<std::vector<Rational>> rows, std::vector<std::size_t> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  // Runs the simplex method for max obj.x over the columns allowed[j].
  // Returns false if unbounded.
  bool optimize(const std::vector<Rational>& obj, const std::vector<bool>& allowed) {
    const std::size_t cols = rows_.empty() ? 0 : rows_[0].size() - 1;
    for (;;) {
      // Reduced costs: obj_j - sum_r obj_{basis r} * a_rj.
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols && enter == cols; ++j) {
        if (!allowed[j] || is_basic(j)) continue;
        Rational rc = obj[j];
        for (std::size_t r = 0; r < rows_.size(); ++r)
          if (sgn(rows_[r][j]) != 0) rc -= obj[basis_[r]] * rows_[r][j];
        if (sgn(rc) > 0) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = rows_.size();
      Rational best;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (sgn(rows_[r][enter]) <= 0) continue;
        Rational ratio = rows_[r].back() / rows_[r][enter];
        if (leave == rows_.size() || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Rational p = rows_[row][col];
    for (auto& v : rows_[row]) v /= p;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == row || sgn(rows_[r][col]) == 0) continue;
      Rational f = rows_[r][col];
      for (std::size_t k = 0; k < rows_[r].size(); ++k)
        if (sgn(rows_[row][k]) != 0) rows_[r][k] -= f * rows_[row][k];
    }
    basis_[row] = col;
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t b : basis_)
      if (b == j) return true;
    return false;
  }

  std::vector<std::vector<Rational>>& rows() { return rows_; }
  std::vector<std::size_t>& basis() { return basis_; }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult lp_maximize(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                     const std::vector<Rational>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw Error(ErrorCode::Internal, "lp: rhs size mismatch");

  // Phase I: artificial variable per row, rows normalized to b >= 0.
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(n + m + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (A[r].size() != n) throw Error(ErrorCode::Internal, "lp: row size mismatch");
    bool flip = sgn(b[r]) < 0;
    for (std::size_t j = 0; j < n; ++j) rows[r][j] = flip ? Rational(-A[r][j]) : A[r][j];
    rows[r][n + r] = 1;
    rows[r][n + m] = flip ? Rational(-b[r]) : b[r];
    basis[r] = n + r;
  }
  Tableau t(std::move(rows), std::move(basis));
  std::vector<Rational> phase1(n + m);
  for (std::size_t j = n; j < n + m; ++j) phase1[j] = -1;
  t.optimize(phase1, std::vector<bool>(n + m, true));

  LpResult result;
  Rational infeasibility = 0;
  for (std::size_t r = 0; r < m; ++r)
    if (t.basis()[r] >= n) infeasibility += t.rows()[r].back();
  if (sgn(infeasibility) != 0) return result;

  // Drive remaining (zero-valued) artificials out of the basis; rows with no
  // usable pivot are redundant and dropped.
  for (std::size_t r = 0; r < t.rows().size();) {
    if (t.basis()[r] < n) {
      ++r;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n && col == n; ++j)
      if (sgn(t.rows()[r][j]) != 0 && !t.is_basic(j)) col = j;
    if (col == n) {
      t.rows().erase(t.rows().begin() + static_cast<std::ptrdiff_t>(r));
      t.basis().erase(t.basis().begin() + static_cast<std::ptrdiff_t>(r));
    } else {
      t.pivot(r, col);
      ++r;
    }
  }

  std::vector<Rational> obj(n + m);
  for (std::size_t j = 0; j < n; ++j) obj[j] = c[j];
  std::vector<bool> allowed(n + m, false);
  for (std::size_t j = 0; j < n; ++j) allowed[j] = true;
  if (!t.optimize(obj, allowed)) {
    result.status = LpResult::Status::Unbounded;
    return result;
  }
  result.status = LpResult::Status::Optimal;
  result.x.assign(n, 0);
  for (std::size_t r = 0; r < t.rows().size(); ++r)
    if (t.basis()[r] < n) result.x[t.basis()[r]] = t.rows()[r].back();
  result.value = 0;
  for (std::size_t j = 0; j < n; ++j) result.value += c[j] * result.x[j];
  return result;
}

}  // namespace segalis
