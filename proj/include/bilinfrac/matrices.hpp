#pragma once

#include "bilinfrac/rational.hpp"

#include <array>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilinfrac {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  /// Nested rows; throws std::invalid_argument if the rows are ragged.
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix zero(std::size_t rows, std::size_t cols) { return RationalMatrix(rows, cols); }
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols_if_empty = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  RationalMatrix transpose() const;
  RationalMatrix column(std::size_t c) const;
  /// Columns [first, first + count).
  RationalMatrix columns(std::size_t first, std::size_t count) const;
  bool is_zero() const;

  /// Row-major doubles, for the numerical side.
  std::vector<double> to_doubles() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
/// [top; bottom].
RationalMatrix vstack(const RationalMatrix& top, const RationalMatrix& bottom);
/// [left | right].
RationalMatrix hstack(const RationalMatrix& left, const RationalMatrix& right);

std::string to_string(const RationalMatrix& m);

/// Exact rank by fraction-free (Bareiss) elimination.
std::size_t rank(const RationalMatrix& m);
/// Exact determinant by fraction-free elimination.
Rational determinant(const RationalMatrix& m);
/// Exact inverse. Throws SingularMatrixError for singular input, std::invalid_argument for non-square input.
RationalMatrix invert(const RationalMatrix& m);

/// The n x m matrix with I_r in its top-left block and zeros elsewhere.
RationalMatrix rank_block(std::size_t rows, std::size_t cols, std::size_t r);

/// P * D * Q = rank_block(n, m, r) with P (n x n) and Q (m x m) invertible.
struct SingleNormalForm {
  RationalMatrix P;
  RationalMatrix Q;
  std::size_t r = 0;
};

SingleNormalForm single_normal_form(const RationalMatrix& d);
bool verify(const SingleNormalForm& nf, const RationalMatrix& d);

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Simultaneous reduction of D1 (n1 x m) and D2 (n2 x m) whose stack has rank m:
///   P1 * D1 * Q = [ I_r1 0 ; 0 0 ]   (identity in the first r1 columns)
///   P2 * D2 * Q = [ 0 I_r2 ; 0 0 ]   (identity in the last r2 columns)
/// The columns of Q split into blocks of widths (m - r2, r1 + r2 - m, m - r1): the first block is seen
/// only by D1, the last only by D2, the middle by both.
struct JointNormalForm {
  RationalMatrix P1;
  RationalMatrix P2;
  RationalMatrix Q;
  std::size_t r1 = 0;
  std::size_t r2 = 0;

  std::array<std::size_t, 3> block_widths() const;
};

/// Throws PreconditionError when the stacked matrix has rank below m, std::invalid_argument on a
/// column-count mismatch.
JointNormalForm joint_normal_form(const RationalMatrix& d1, const RationalMatrix& d2);

/// The two target matrices of a joint normal form.
RationalMatrix joint_first_target(std::size_t n1, std::size_t m, std::size_t r1);
RationalMatrix joint_second_target(std::size_t n2, std::size_t m, std::size_t r2);

struct JointReconstruction {
  bool first = false;
  bool second = false;
  bool invertible = false;
  bool ok() const { return first && second && invertible; }
};

JointReconstruction verify(const JointNormalForm& nf, const RationalMatrix& d1, const RationalMatrix& d2);

}  // namespace bilinfrac
