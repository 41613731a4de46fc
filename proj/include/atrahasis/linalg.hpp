#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "atrahasis/finite_field.hpp"

namespace atrahasis {

/// Dense vector over a field.
class Vector {
 public:
  Vector(const Field& field, std::vector<Elem> coords);
  Vector(const Field& field, std::size_t size) : field_(&field), coords_(size, 0) {}

  const Field& field() const { return *field_; }
  std::size_t size() const { return coords_.size(); }
  Elem operator[](std::size_t i) const { return coords_[i]; }
  Elem& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Elem> coords() const { return coords_; }
  const std::vector<Elem>& data() const { return coords_; }
  bool is_zero() const;

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.field_ == b.field_ && a.coords_ == b.coords_;
  }

 private:
  const Field* field_;
  std::vector<Elem> coords_;
};

/// Dense row-major matrix over a field.
class Matrix {
 public:
  Matrix(const Field& field, std::size_t rows, std::size_t cols)
      : field_(&field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(const Field& field, std::size_t rows, std::size_t cols, std::vector<Elem> entries);

  static Matrix identity(const Field& field, std::size_t n);
  /// Stacks equal-length rows; an empty list gives a 0 x cols matrix.
  static Matrix from_rows(const Field& field, const std::vector<std::vector<Elem>>& rows, std::size_t cols = 0);

  const Field& field() const { return *field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Elem>& data() const { return data_; }

  void append_row(std::span<const Elem> r);
  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  /// y = this · x
  std::vector<Elem> apply(std::span<const Elem> x) const;
  /// Same as apply() but writes into `out` (size rows()) without allocating.
  void apply_into(std::span<const Elem> x, std::span<Elem> out) const;
  /// Rows listed in `which`, in that order.
  Matrix select_rows(std::span<const std::size_t> which) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  const Field* field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

Elem dot(const Field& field, std::span<const Elem> a, std::span<const Elem> b);

std::size_t rank(const Matrix& m);

Elem determinant(const Matrix& m);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m);

struct SolveResult {
  std::vector<Elem> x;
  bool unique = true;  // false when free variables were set to zero
};

/// Solves A·x = b by Gauss–Jordan elimination with first-nonzero pivoting.
/// Throws NoSolutionError (carrying an offending row) for inconsistent systems.
SolveResult solve(const Matrix& a, std::span<const Elem> b);

/// Basis of {x : A·x = 0} as the columns of the returned cols() x (cols()-rank) matrix.
/// Built from the reduced row echelon form: the basis vector for free column j
/// has a 1 at j and zeros at every other free column.
struct Nullspace {
  Matrix basis;                       // columns span the kernel
  std::vector<std::size_t> pivots;    // pivot columns of the RREF
  std::vector<std::size_t> free_cols; // one per basis column, increasing
};
Nullspace nullspace(const Matrix& a);

/// Indices of a maximal linearly independent subset of rows, chosen greedily in order.
std::vector<std::size_t> independent_rows(const Matrix& m);

/// Incremental echelon basis that remembers how each stored row was built from
/// the inserted generators, so membership queries return coefficients over the
/// original generators.
class SpanBasis {
 public:
  SpanBasis(const Field& field, std::size_t dim) : field_(&field), dim_(dim) {}

  /// Inserts a generator; returns true when it enlarged the span.
  bool insert(std::span<const Elem> v);
  /// Would `v` enlarge the span? Does not modify the basis.
  bool is_independent(std::span<const Elem> v) const;

  std::size_t rank() const { return rows_.size(); }
  std::size_t generators() const { return generators_; }
  std::size_t dim() const { return dim_; }

  /// Coefficients c (one per inserted generator) with Σ c_i g_i = target, or nullopt.
  std::optional<std::vector<Elem>> express(std::span<const Elem> target) const;

 private:
  struct Row {
    std::vector<Elem> vec;   // reduced, pivot entry normalized to 1
    std::size_t pivot;
    std::vector<Elem> comb;  // vec = Σ comb_i · generator_i
  };
  /// Reduces v against stored rows, accumulating the combination used.
  void reduce(std::vector<Elem>& v, std::vector<Elem>& comb) const;

  const Field* field_;
  std::size_t dim_;
  std::size_t generators_ = 0;
  std::vector<Row> rows_;
};

/// Coefficients c with Σ c_i generators_i = target, or nullopt if target is
/// outside the span.
std::optional<std::vector<Elem>> in_span(const Vector& target, const std::vector<Vector>& generators);

}  // namespace atrahasis
