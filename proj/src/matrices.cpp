#include "bilinfrac/matrices.hpp"

#include <numeric>
#include <sstream>
#include <utility>

namespace bilinfrac {

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (const auto& e : row) entries_.push_back(e);
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols_if_empty) {
  std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
  RationalMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix RationalMatrix::column(std::size_t c) const { return columns(c, 1); }

RationalMatrix RationalMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw std::out_of_range("column range out of bounds");
  RationalMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

bool RationalMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (sgn(e) != 0) return false;
  return true;
}

std::vector<double> RationalMatrix::to_doubles() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.get_d());
  return out;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  RationalMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

RationalMatrix vstack(const RationalMatrix& top, const RationalMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw std::invalid_argument("vstack column mismatch");
  RationalMatrix out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r)
    for (std::size_t c = 0; c < top.cols(); ++c) out(r, c) = top(r, c);
  for (std::size_t r = 0; r < bottom.rows(); ++r)
    for (std::size_t c = 0; c < bottom.cols(); ++c) out(top.rows() + r, c) = bottom(r, c);
  return out;
}

RationalMatrix hstack(const RationalMatrix& left, const RationalMatrix& right) {
  if (left.rows() != right.rows()) throw std::invalid_argument("hstack row mismatch");
  RationalMatrix out(left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    for (std::size_t c = 0; c < left.cols(); ++c) out(r, c) = left(r, c);
    for (std::size_t c = 0; c < right.cols(); ++c) out(r, left.cols() + c) = right(r, c);
  }
  return out;
}

std::string to_string(const RationalMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? "; " : "");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << to_string(m(r, c));
  }
  os << ']';
  return os.str();
}

namespace {

using IntegerRows = std::vector<std::vector<mpz_class>>;

// Clears denominators row by row; row scaling preserves rank and only rescales the determinant.
IntegerRows integer_rows(const RationalMatrix& m, mpz_class* scale = nullptr) {
  IntegerRows rows(m.rows(), std::vector<mpz_class>(m.cols()));
  if (scale) *scale = 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
    if (scale) *scale *= l;
  }
  return rows;
}

struct BareissResult {
  std::size_t rank = 0;
  int sign = 1;
  mpz_class last_pivot = 1;
};

// Fraction-free row echelon reduction in place. Pivot: first nonzero entry of the current column.
BareissResult bareiss(IntegerRows& a) {
  BareissResult res;
  const std::size_t nr = a.size();
  const std::size_t nc = nr ? a.front().size() : 0;
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t piv = row;
    while (piv < nr && a[piv][col] == 0) ++piv;
    if (piv == nr) continue;
    if (piv != row) {
      std::swap(a[piv], a[row]);
      res.sign = -res.sign;
    }
    const mpz_class& p = a[row][col];
    for (std::size_t i = row + 1; i < nr; ++i) {
      for (std::size_t j = col + 1; j < nc; ++j) {
        mpz_class t = a[i][j] * p - a[i][col] * a[row][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = p;
    ++row;
  }
  res.rank = row;
  res.last_pivot = prev;
  return res;
}

}  // namespace

std::size_t rank(const RationalMatrix& m) {
  IntegerRows rows = integer_rows(m);
  return bareiss(rows).rank;
}

Rational determinant(const RationalMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() == 0) return Rational(1);
  mpz_class scale;
  IntegerRows rows = integer_rows(m, &scale);
  BareissResult res = bareiss(rows);
  if (res.rank < m.rows()) return Rational(0);
  Rational det(res.sign * res.last_pivot, scale);
  det.canonicalize();
  return det;
}

RationalMatrix invert(const RationalMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a(piv, col)) == 0) ++piv;
    if (piv == n) throw SingularMatrixError("matrix is singular");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(a(i, col)) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

RationalMatrix rank_block(std::size_t rows, std::size_t cols, std::size_t r) {
  RationalMatrix out(rows, cols);
  for (std::size_t i = 0; i < r; ++i) out(i, i) = 1;
  return out;
}

SingleNormalForm single_normal_form(const RationalMatrix& d) {
  const std::size_t n = d.rows();
  const std::size_t m = d.cols();
  RationalMatrix reduced = d;
  RationalMatrix rowops = RationalMatrix::identity(n);
  std::vector<std::size_t> pivots;

  // Reduced row echelon form, recording the row operations in `rowops`.
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t piv = row;
    while (piv < n && sgn(reduced(piv, col)) == 0) ++piv;
    if (piv == n) continue;
    if (piv != row)
      for (std::size_t j = 0; j < std::max(n, m); ++j) {
        if (j < m) std::swap(reduced(piv, j), reduced(row, j));
        if (j < n) std::swap(rowops(piv, j), rowops(row, j));
      }
    Rational p = reduced(row, col);
    for (std::size_t j = 0; j < m; ++j) reduced(row, j) /= p;
    for (std::size_t j = 0; j < n; ++j) rowops(row, j) /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || sgn(reduced(i, col)) == 0) continue;
      Rational f = reduced(i, col);
      for (std::size_t j = 0; j < m; ++j) reduced(i, j) -= f * reduced(row, j);
      for (std::size_t j = 0; j < n; ++j) rowops(i, j) -= f * rowops(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  const std::size_t r = pivots.size();

  // Pivot columns first, then the rest in their original order.
  std::vector<std::size_t> order = pivots;
  for (std::size_t c = 0, k = 0; c < m; ++c) {
    if (k < r && pivots[k] == c) {
      ++k;
      continue;
    }
    order.push_back(c);
  }
  RationalMatrix perm(m, m);
  for (std::size_t j = 0; j < m; ++j) perm(order[j], j) = 1;

  // Clear the non-pivot block B of R * perm = [I B; 0 0] with [I -B; 0 I].
  RationalMatrix clear = RationalMatrix::identity(m);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = r; j < m; ++j) clear(i, j) = -reduced(i, order[j]);

  return SingleNormalForm{std::move(rowops), perm * clear, r};
}

bool verify(const SingleNormalForm& nf, const RationalMatrix& d) {
  if (determinant(nf.P) == 0 || determinant(nf.Q) == 0) return false;
  return nf.P * d * nf.Q == rank_block(d.rows(), d.cols(), nf.r);
}

std::array<std::size_t, 3> JointNormalForm::block_widths() const {
  const std::size_t m = Q.rows();
  return {m - r2, r1 + r2 - m, m - r1};
}

namespace {

// Inverse of [a | e_i ...] where unit vectors are appended greedily (lowest index first) until
// the columns form a basis; then P * a = [I; 0].
RationalMatrix completing_inverse(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  RationalMatrix basis = a;
  std::size_t current = rank(basis);
  for (std::size_t i = 0; i < n && basis.cols() < n; ++i) {
    RationalMatrix unit(n, 1);
    unit(i, 0) = 1;
    RationalMatrix candidate = hstack(basis, unit);
    std::size_t r = rank(candidate);
    if (r > current) {
      basis = std::move(candidate);
      current = r;
    }
  }
  return invert(basis);
}

}  // namespace

RationalMatrix joint_first_target(std::size_t n1, std::size_t m, std::size_t r1) { return rank_block(n1, m, r1); }

RationalMatrix joint_second_target(std::size_t n2, std::size_t m, std::size_t r2) {
  RationalMatrix out(n2, m);
  for (std::size_t i = 0; i < r2; ++i) out(i, m - r2 + i) = 1;
  return out;
}

JointNormalForm joint_normal_form(const RationalMatrix& d1, const RationalMatrix& d2) {
  if (d1.cols() != d2.cols()) throw std::invalid_argument("D1 and D2 must have the same number of columns");
  const std::size_t m = d1.cols();
  if (rank(vstack(d1, d2)) != m)
    throw PreconditionError("joint normal form needs the stacked matrix to have rank m = " + std::to_string(m));

  SingleNormalForm first = single_normal_form(d1);
  SingleNormalForm second = single_normal_form(d2);
  const std::size_t r1 = first.r;
  const std::size_t r2 = second.r;

  // Kernel bases: the trailing columns of each single-form Q.
  RationalMatrix kernel1 = first.Q.columns(r1, m - r1);
  RationalMatrix kernel2 = second.Q.columns(r2, m - r2);

  // Middle block: lexicographically first columns j < r1 of Q1 whose D2-images, together with
  // the D2-images of ker D1, stay independent.
  RationalMatrix image = d2 * first.Q;
  RationalMatrix chosen_images = image.columns(r1, m - r1);
  RationalMatrix middle(m, 0);
  std::size_t current = rank(chosen_images);
  for (std::size_t j = 0; j < r1 && middle.cols() < r1 + r2 - m; ++j) {
    RationalMatrix candidate = hstack(chosen_images, image.column(j));
    std::size_t r = rank(candidate);
    if (r > current) {
      chosen_images = std::move(candidate);
      middle = hstack(middle, first.Q.column(j));
      current = r;
    }
  }

  JointNormalForm nf;
  nf.r1 = r1;
  nf.r2 = r2;
  nf.Q = hstack(hstack(kernel2, middle), kernel1);
  nf.P1 = completing_inverse(d1 * nf.Q.columns(0, r1));
  nf.P2 = completing_inverse(d2 * nf.Q.columns(m - r2, r2));
  return nf;
}

JointReconstruction verify(const JointNormalForm& nf, const RationalMatrix& d1, const RationalMatrix& d2) {
  const std::size_t m = d1.cols();
  JointReconstruction out;
  out.invertible = determinant(nf.P1) != 0 && determinant(nf.P2) != 0 && determinant(nf.Q) != 0;
  out.first = nf.P1 * d1 * nf.Q == joint_first_target(d1.rows(), m, nf.r1);
  out.second = nf.P2 * d2 * nf.Q == joint_second_target(d2.rows(), m, nf.r2);
  return out;
}

}  // namespace bilinfrac
