#include "segalis/linalg.hpp"

#include <utility>

#include "segalis/error.hpp"

namespace segalis {

Field Field::prime(int p) {
  if (p < 2 || p >= (1 << 15)) throw Error(ErrorCode::BadInput, "field characteristic " + std::to_string(p));
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) throw Error(ErrorCode::BadInput, std::to_string(p) + " is not prime");
  return Field(p);
}

std::string Field::name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

Field Field::parse(const std::string& s) {
  if (s == "Q") return rationals();
  if (s.size() >= 2 && s[0] == 'F') {
    try {
      return prime(std::stoi(s.substr(1)));
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::BadInput, "unknown field '" + s + "'");
}

Rational Field::reduce(const Rational& x) const {
  if (p_ == 0) return x;
  mpz_class m(p_);
  mpz_class num = x.get_num() % m;
  mpz_class den = x.get_den() % m;
  if (den == 0) throw Error(ErrorCode::BadInput, x.get_str() + " has no image in " + name());
  mpz_class den_inv;
  mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  mpz_class r = (num * den_inv) % m;
  if (r < 0) r += m;
  return Rational(r);
}

Rational Field::add(const Rational& a, const Rational& b) const {
  if (p_ == 0) return a + b;
  Rational r = a + b;
  if (r >= p_) r -= p_;
  return r;
}

Rational Field::sub(const Rational& a, const Rational& b) const {
  if (p_ == 0) return a - b;
  Rational r = a - b;
  if (r < 0) r += p_;
  return r;
}

Rational Field::mul(const Rational& a, const Rational& b) const {
  if (p_ == 0) return a * b;
  mpz_class r = (a.get_num() * b.get_num()) % p_;
  return Rational(r);
}

Rational Field::inv(const Rational& a) const {
  if (sgn(a) == 0) throw Error(ErrorCode::Internal, "inverse of zero");
  if (p_ == 0) return 1 / a;
  mpz_class r, m(p_);
  mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), m.get_mpz_t());
  return Rational(r);
}

Matrix::Matrix(int rows, int cols, Field field)
    : rows_(rows), cols_(cols), field_(field), a_(static_cast<std::size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw Error(ErrorCode::BadInput, "negative matrix shape");
}

Matrix Matrix::identity(int n, Field field) {
  Matrix m(n, n, field);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows, int cols, Field field) {
  Matrix m(static_cast<int>(rows.size()), cols, field);
  for (int i = 0; i < m.rows_; ++i) {
    if (static_cast<int>(rows[i].size()) != cols) throw Error(ErrorCode::BadInput, "ragged matrix rows");
    for (int j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_ || !(field_ == o.field_)) throw Error(ErrorCode::BadInput, "matrix product shape mismatch");
  Matrix r(rows_, o.cols_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& x = (*this)(i, k);
      if (sgn(x) == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Rational& y = o(k, j);
        if (sgn(y) == 0) continue;
        r(i, j) = field_.add(r(i, j), field_.mul(x, y));
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::BadInput, "matrix sum shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.add(a_[i], o.a_[i]);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::BadInput, "matrix difference shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.sub(a_[i], o.a_[i]);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::row_block(int first, int count) const {
  Matrix r(count, cols_, field_);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(first + i, j);
  return r;
}

Matrix Matrix::col_block(int first, int count) const {
  Matrix r(rows_, count, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < count; ++j) r(i, j) = (*this)(i, first + j);
  return r;
}

Matrix Matrix::select_rows(const std::vector<int>& rows) const {
  Matrix r(static_cast<int>(rows.size()), cols_, field_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols_; ++j) r(static_cast<int>(i), j) = (*this)(rows[i], j);
  return r;
}

Matrix Matrix::vstack(const std::vector<Matrix>& blocks, int cols, Field field) {
  int rows = 0;
  for (const auto& b : blocks) rows += b.rows_;
  Matrix r(rows, cols, field);
  int at = 0;
  for (const auto& b : blocks) {
    r.paste(b, at, 0);
    at += b.rows_;
  }
  return r;
}

Matrix Matrix::hstack(const std::vector<Matrix>& blocks, int rows, Field field) {
  int cols = 0;
  for (const auto& b : blocks) cols += b.cols_;
  Matrix r(rows, cols, field);
  int at = 0;
  for (const auto& b : blocks) {
    r.paste(b, 0, at);
    at += b.cols_;
  }
  return r;
}

void Matrix::paste(const Matrix& block, int r, int c) {
  if (r + block.rows_ > rows_ || c + block.cols_ > cols_) throw Error(ErrorCode::BadInput, "block out of range");
  for (int i = 0; i < block.rows_; ++i)
    for (int j = 0; j < block.cols_; ++j) (*this)(r + i, c + j) = block(i, j);
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (sgn(x) != 0) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && a_ == o.a_;
}

namespace {

// Gaussian elimination touching only the nonzero entries of each pivot row.
// With `full` the pivot columns are cleared above as well as below.
std::vector<int> eliminate(Matrix& m, bool full) {
  const Field& F = m.field();
  std::vector<int> pivots;
  std::vector<int> nz;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (sgn(m(i, c)) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = c; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rational scale = F.inv(m(r, c));
    nz.clear();
    for (int j = c; j < m.cols(); ++j)
      if (sgn(m(r, j)) != 0) {
        m(r, j) = F.mul(m(r, j), scale);
        nz.push_back(j);
      }
    for (int i = full ? 0 : r + 1; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c);
      for (int j : nz) m(i, j) = F.sub(m(i, j), F.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RowEchelon rref(Matrix m) {
  auto pivots = eliminate(m, true);
  return {std::move(m), std::move(pivots)};
}

int rank(const Matrix& m) {
  Matrix w = m;
  return static_cast<int>(eliminate(w, false).size());
}

std::vector<int> free_columns(const Matrix& m) {
  Matrix w = m;
  auto pivots = eliminate(w, false);
  std::vector<int> out;
  std::size_t k = 0;
  for (int c = 0; c < m.cols(); ++c) {
    if (k < pivots.size() && pivots[k] == c)
      ++k;
    else
      out.push_back(c);
  }
  return out;
}

Matrix kernel(const Matrix& m) {
  auto [red, pivots] = rref(m);
  const Field& F = m.field();
  std::vector<int> free;
  std::size_t k = 0;
  for (int c = 0; c < m.cols(); ++c) {
    if (k < pivots.size() && pivots[k] == c)
      ++k;
    else
      free.push_back(c);
  }
  Matrix basis(m.cols(), static_cast<int>(free.size()), F);
  for (std::size_t f = 0; f < free.size(); ++f) {
    basis(free[f], static_cast<int>(f)) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (sgn(red(static_cast<int>(r), free[f])) != 0)
        basis(pivots[r], static_cast<int>(f)) = F.sub(0, red(static_cast<int>(r), free[f]));
  }
  return basis;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::BadInput, "solve shape mismatch");
  Matrix aug = Matrix::hstack({a, b}, a.rows(), a.field());
  auto [red, pivots] = rref(std::move(aug));
  for (int p : pivots)
    if (p >= a.cols()) return std::nullopt;
  Matrix x(a.cols(), b.cols(), a.field());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (int j = 0; j < b.cols(); ++j) x(pivots[r], j) = red(static_cast<int>(r), a.cols() + j);
  return x;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::BadInput, "inverse of a non-square matrix");
  auto x = solve(m, Matrix::identity(m.rows(), m.field()));
  if (!x || rank(m) != m.rows()) throw Error(ErrorCode::BadInput, "matrix is singular");
  return *x;
}

std::vector<std::vector<std::string>> to_strings(const Matrix& m) {
  std::vector<std::vector<std::string>> out(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[i].push_back(m(i, j).get_str());
  return out;
}

}  // namespace segalis
