#include "atrahasis/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace atrahasis {

namespace {

// row[i] += c · src[i] for i >= from
void axpy(const Field& f, std::span<Elem> row, Elem c, std::span<const Elem> src, std::size_t from = 0) {
  if (c == 0) return;
  for (std::size_t i = from; i < row.size(); ++i) {
    if (src[i] != 0) row[i] = f.add(row[i], f.mul(c, src[i]));
  }
}

void scale(const Field& f, std::span<Elem> row, Elem c) {
  for (Elem& e : row) e = f.mul(e, c);
}

// In-place Gauss–Jordan on an r x c matrix stored row-major; only the first
// `pivot_cols` columns are eligible as pivots. Returns the pivot columns, and
// `order` receives the original row index now sitting at each position.
std::vector<std::size_t> reduce_rows(const Field& f, std::vector<Elem>& a, std::size_t r, std::size_t c,
                                     std::size_t pivot_cols, std::vector<std::size_t>* order) {
  std::vector<std::size_t> pivots;
  if (order) {
    order->resize(r);
    std::iota(order->begin(), order->end(), 0);
  }
  std::size_t next = 0;
  for (std::size_t col = 0; col < pivot_cols && next < r; ++col) {
    std::size_t sel = next;
    while (sel < r && a[sel * c + col] == 0) ++sel;
    if (sel == r) continue;
    if (sel != next) {
      std::swap_ranges(a.begin() + sel * c, a.begin() + (sel + 1) * c, a.begin() + next * c);
      if (order) std::swap((*order)[sel], (*order)[next]);
    }
    std::span<Elem> prow(a.data() + next * c, c);
    scale(f, prow, f.inv(prow[col]));
    for (std::size_t i = 0; i < r; ++i) {
      if (i == next) continue;
      const Elem factor = a[i * c + col];
      if (factor != 0) axpy(f, std::span<Elem>(a.data() + i * c, c), f.neg(factor), prow, col);
    }
    pivots.push_back(col);
    ++next;
  }
  return pivots;
}

}  // namespace

Vector::Vector(const Field& field, std::vector<Elem> coords) : field_(&field), coords_(std::move(coords)) {
  for (Elem e : coords_) {
    if (!field.contains(e)) throw UsageError("vector coordinate out of range for " + field.name());
  }
}

bool Vector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](Elem e) { return e == 0; });
}

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
    : field_(&field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw UsageError("matrix entry count does not match its shape");
}

Matrix Matrix::identity(const Field& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const Field& field, const std::vector<std::vector<Elem>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  Matrix m(field, 0, cols);
  m.data_.reserve(rows.size() * cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void Matrix::append_row(std::span<const Elem> r) {
  if (r.size() != cols_) throw UsageError("row length does not match matrix width");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

Matrix Matrix::transpose() const {
  Matrix t(*field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (field_ != o.field_) throw UsageError("matrix product across fields");
  if (cols_ != o.rows_) throw UsageError("matrix product shape mismatch");
  Matrix out(*field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t l = 0; l < cols_; ++l) {
      const Elem a = (*this)(i, l);
      if (a != 0) axpy(*field_, out.row(i), a, o.row(l));
    }
  }
  return out;
}

std::vector<Elem> Matrix::apply(std::span<const Elem> x) const {
  std::vector<Elem> y(rows_, 0);
  apply_into(x, y);
  return y;
}

void Matrix::apply_into(std::span<const Elem> x, std::span<Elem> out) const {
  if (x.size() != cols_ || out.size() != rows_) throw UsageError("matrix-vector shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i) out[i] = dot(*field_, row(i), x);
}

Matrix Matrix::select_rows(std::span<const std::size_t> which) const {
  Matrix out(*field_, 0, cols_);
  for (std::size_t r : which) {
    if (r >= rows_) throw UsageError("row index out of range");
    out.append_row(row(r));
  }
  return out;
}

Elem dot(const Field& field, std::span<const Elem> a, std::span<const Elem> b) {
  if (a.size() != b.size()) throw UsageError("dot product length mismatch");
  Elem acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) acc = field.add(acc, field.mul(a[i], b[i]));
  }
  return acc;
}

std::size_t rank(const Matrix& m) {
  std::vector<Elem> a = m.data();
  return reduce_rows(m.field(), a, m.rows(), m.cols(), m.cols(), nullptr).size();
}

Elem determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw UsageError("determinant of a non-square matrix");
  const Field& f = m.field();
  const std::size_t n = m.rows();
  std::vector<Elem> a = m.data();
  Elem det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a[sel * n + col] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      std::swap_ranges(a.begin() + sel * n, a.begin() + (sel + 1) * n, a.begin() + col * n);
      det = f.neg(det);
    }
    const Elem piv = a[col * n + col];
    det = f.mul(det, piv);
    const Elem piv_inv = f.inv(piv);
    std::span<const Elem> prow(a.data() + col * n, n);
    for (std::size_t i = col + 1; i < n; ++i) {
      const Elem factor = a[i * n + col];
      if (factor != 0)
        axpy(f, std::span<Elem>(a.data() + i * n, n), f.neg(f.mul(factor, piv_inv)), prow, col);
    }
  }
  return det;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw UsageError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const std::size_t w = 2 * n;
  std::vector<Elem> a(n * w, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(m.row(i).begin(), n, a.begin() + i * w);
    a[i * w + n + i] = 1;
  }
  if (reduce_rows(m.field(), a, n, w, n, nullptr).size() != n) return std::nullopt;
  Matrix inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i) std::copy_n(a.begin() + i * w + n, n, inv.row(i).begin());
  return inv;
}

SolveResult solve(const Matrix& a, std::span<const Elem> b) {
  if (b.size() != a.rows()) throw UsageError("right-hand side length does not match row count");
  const Field& f = a.field();
  const std::size_t r = a.rows(), c = a.cols(), w = c + 1;
  std::vector<Elem> aug(r * w);
  for (std::size_t i = 0; i < r; ++i) {
    std::copy_n(a.row(i).begin(), c, aug.begin() + i * w);
    aug[i * w + c] = b[i];
  }
  std::vector<std::size_t> order;
  const auto pivots = reduce_rows(f, aug, r, w, c, &order);
  for (std::size_t i = pivots.size(); i < r; ++i) {
    if (aug[i * w + c] != 0)
      throw NoSolutionError("inconsistent linear system at equation " + std::to_string(order[i]), order[i]);
  }
  SolveResult res;
  res.x.assign(c, 0);
  res.unique = pivots.size() == c;
  for (std::size_t i = 0; i < pivots.size(); ++i) res.x[pivots[i]] = aug[i * w + c];
  return res;
}

Nullspace nullspace(const Matrix& a) {
  const Field& f = a.field();
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<Elem> red = a.data();
  Nullspace ns{Matrix(f, c, 0), {}, {}};
  ns.pivots = reduce_rows(f, red, r, c, c, nullptr);
  std::vector<bool> is_pivot(c, false);
  for (std::size_t p : ns.pivots) is_pivot[p] = true;
  for (std::size_t j = 0; j < c; ++j) {
    if (!is_pivot[j]) ns.free_cols.push_back(j);
  }
  Matrix basis(f, c, ns.free_cols.size());
  for (std::size_t k = 0; k < ns.free_cols.size(); ++k) {
    const std::size_t j = ns.free_cols[k];
    basis(j, k) = 1;
    for (std::size_t i = 0; i < ns.pivots.size(); ++i) basis(ns.pivots[i], k) = f.neg(red[i * c + j]);
  }
  ns.basis = std::move(basis);
  return ns;
}

std::vector<std::size_t> independent_rows(const Matrix& m) {
  SpanBasis sb(m.field(), m.cols());
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (sb.insert(m.row(i))) keep.push_back(i);
  }
  return keep;
}

// ---------------------------------------------------------------------------

void SpanBasis::reduce(std::vector<Elem>& v, std::vector<Elem>& comb) const {
  const Field& f = *field_;
  // Each stored row is zero on the pivots of earlier rows, so a single pass in
  // insertion order clears every pivot position.
  for (const Row& row : rows_) {
    const Elem c = v[row.pivot];
    if (c == 0) continue;
    const Elem nc = f.neg(c);
    axpy(f, v, nc, row.vec, row.pivot);
    axpy(f, std::span<Elem>(comb.data(), row.comb.size()), nc, row.comb);
  }
}

bool SpanBasis::insert(std::span<const Elem> v) {
  if (v.size() != dim_) throw UsageError("span generator has the wrong length");
  const Field& f = *field_;
  const std::size_t idx = generators_++;
  std::vector<Elem> vec(v.begin(), v.end());
  std::vector<Elem> comb(generators_, 0);
  comb[idx] = 1;
  // comb[i] tracks -(multiplier) so far; reduce() subtracts rows.
  reduce(vec, comb);
  const auto it = std::find_if(vec.begin(), vec.end(), [](Elem e) { return e != 0; });
  if (it == vec.end()) return false;
  const std::size_t pivot = static_cast<std::size_t>(it - vec.begin());
  const Elem s = f.inv(vec[pivot]);
  scale(f, vec, s);
  scale(f, comb, s);
  rows_.push_back(Row{std::move(vec), pivot, std::move(comb)});
  return true;
}

bool SpanBasis::is_independent(std::span<const Elem> v) const {
  if (v.size() != dim_) throw UsageError("span query has the wrong length");
  std::vector<Elem> vec(v.begin(), v.end());
  std::vector<Elem> comb(generators_, 0);
  reduce(vec, comb);
  return std::any_of(vec.begin(), vec.end(), [](Elem e) { return e != 0; });
}

std::optional<std::vector<Elem>> SpanBasis::express(std::span<const Elem> target) const {
  if (target.size() != dim_) throw UsageError("span query has the wrong length");
  const Field& f = *field_;
  std::vector<Elem> vec(target.begin(), target.end());
  // acc = Σ (amount subtracted) · row.comb; target = Σ coefficient·row + remainder.
  std::vector<Elem> acc(generators_, 0);
  reduce(vec, acc);
  if (std::any_of(vec.begin(), vec.end(), [](Elem e) { return e != 0; })) return std::nullopt;
  for (Elem& e : acc) e = f.neg(e);
  return acc;
}

std::optional<std::vector<Elem>> in_span(const Vector& target, const std::vector<Vector>& generators) {
  SpanBasis sb(target.field(), target.size());
  for (const Vector& g : generators) {
    if (&g.field() != &target.field()) throw UsageError("in_span across fields");
    sb.insert(g.coords());
  }
  return sb.express(target.coords());
}

}  // namespace atrahasis
