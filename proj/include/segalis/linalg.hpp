#pragma once

#include <optional>
#include <string>
#include <vector>

#include "segalis/rational.hpp"

namespace segalis {

/// The rationals (characteristic 0) or a prime field F_p. Elements of F_p
/// are stored as integer Rationals in [0, p).
class Field {
 public:
  Field() = default;
  static Field rationals() { return Field(); }
  /// Throws BadInput unless p is a prime below 2^15.
  static Field prime(int p);

  int characteristic() const noexcept { return p_; }
  bool is_rational() const noexcept { return p_ == 0; }
  std::string name() const;
  /// Parses "Q" or "F<p>".
  static Field parse(const std::string& s);

  Rational reduce(const Rational& x) const;
  Rational add(const Rational& a, const Rational& b) const;
  Rational sub(const Rational& a, const Rational& b) const;
  Rational mul(const Rational& a, const Rational& b) const;
  Rational inv(const Rational& a) const;

  bool operator==(const Field&) const = default;

 private:
  explicit Field(int p) : p_(p) {}
  int p_ = 0;
};

/// Dense matrix over a Field; rows x cols, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, Field field = {});
  static Matrix identity(int n, Field field = {});
  /// Entries are reduced into the field.
  static Matrix from_rows(const std::vector<std::vector<Rational>>& rows, int cols, Field field = {});

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  const Field& field() const noexcept { return field_; }

  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  /// Sets an entry after reducing it into the field.
  void set(int i, int j, const Rational& v) { (*this)(i, j) = field_.reduce(v); }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix transpose() const;
  Matrix row_block(int first, int count) const;
  Matrix col_block(int first, int count) const;
  Matrix select_rows(const std::vector<int>& rows) const;
  static Matrix vstack(const std::vector<Matrix>& blocks, int cols, Field field);
  static Matrix hstack(const std::vector<Matrix>& blocks, int rows, Field field);
  /// Writes `block` with its top-left corner at (r, c).
  void paste(const Matrix& block, int r, int c);

  bool is_zero() const;
  bool operator==(const Matrix& o) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Field field_;
  std::vector<Rational> a_;
};

struct RowEchelon {
  Matrix reduced;
  std::vector<int> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination.
RowEchelon rref(Matrix m);
int rank(const Matrix& m);
/// Columns form a basis of {x : m x = 0}. The rows of the free columns of m
/// carry an identity block, so coordinates in this basis are read off there.
Matrix kernel(const Matrix& m);
/// Free (non-pivot) columns of m, in increasing order.
std::vector<int> free_columns(const Matrix& m);
/// Some X with a X = b, or nothing.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);
/// Throws BadInput when m is not invertible.
Matrix inverse(const Matrix& m);

std::vector<std::vector<std::string>> to_strings(const Matrix& m);

}  // namespace segalis
