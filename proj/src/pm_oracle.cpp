#include "atrahasis/pm_oracle.hpp"

namespace atrahasis::pm {

namespace {

std::vector<Elem> row_times(const Matrix& m, std::span<const Elem> v) {
  // v · m
  const Field& f = m.field();
  std::vector<Elem> out(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = f.add(out[j], f.mul(v[i], m(i, j)));
  return out;
}

std::vector<Elem> combine(const Field& f, std::span<const Elem> a, Elem c, std::span<const Elem> b) {
  std::vector<Elem> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], f.mul(c, b[i]));
  return out;
}

void expect_size(std::span<const Elem> raw, std::size_t k) {
  if (raw.size() != k * (k - 1)) throw UsageError("product-matrix file needs k(k-1) symbols");
}

// Solves [[1, a], [c, e]] (u, v)^T = (p, q)^T.
std::pair<Elem, Elem> decouple(const Field& f, Elem a, Elem c, Elem e, Elem p, Elem q) {
  Matrix m(f, 2, 2, {1, a, c, e});
  const auto r = solve(m, std::vector<Elem>{p, q});
  if (!r.unique) throw AxiomViolation("decoupling matrix is singular (repeated xi)");
  return {r.x[0], r.x[1]};
}

SolveResult solve_or_violate(const Matrix& a, std::span<const Elem> b, const char* what) {
  try {
    auto r = solve(a, b);
    if (!r.unique) throw AxiomViolation(what);
    return r;
  } catch (const NoSolutionError&) {
    throw AxiomViolation(what);
  }
}

// Given rows r_i = v_i · S for the listed v_i (spanning), recover S.
Matrix recover_from_rows(const Field& f, const std::vector<std::vector<Elem>>& vs,
                         const std::vector<std::vector<Elem>>& rows, std::size_t dim) {
  const Matrix V = Matrix::from_rows(f, vs);
  Matrix S(f, dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::vector<Elem> b;
    for (const auto& r : rows) b.push_back(r[col]);
    const auto x = solve_or_violate(V, b, "star vectors do not span").x;
    for (std::size_t i = 0; i < dim; ++i) S(i, col) = x[i];
  }
  return S;
}

}  // namespace

SymmetricFile pack_symmetric(const Field& f, std::size_t k, std::span<const Elem> raw) {
  expect_size(raw, k);
  const std::size_t m = k - 1;
  SymmetricFile file{Matrix(f, m, m), Matrix(f, m, m)};
  std::size_t pos = 0;
  for (Matrix* s : {&file.S1, &file.S2})
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) (*s)(i, j) = (*s)(j, i) = raw[pos++];
  return file;
}

std::vector<Elem> unpack_symmetric(const SymmetricFile& file) {
  std::vector<Elem> raw;
  for (const Matrix* s : {&file.S1, &file.S2})
    for (std::size_t i = 0; i < s->rows(); ++i)
      for (std::size_t j = i; j < s->cols(); ++j) raw.push_back((*s)(i, j));
  return raw;
}

SkewFile pack_skew(const Field& f, std::size_t k, std::span<const Elem> raw) {
  expect_size(raw, k);
  SkewFile file{Matrix(f, k, k), Matrix(f, k, k)};
  std::size_t pos = 0;
  for (Matrix* a : {&file.A1, &file.A2})
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        (*a)(i, j) = raw[pos++];
        (*a)(j, i) = f.neg((*a)(i, j));
      }
  return file;
}

std::vector<Elem> unpack_skew(const SkewFile& file) {
  std::vector<Elem> raw;
  for (const Matrix* a : {&file.A1, &file.A2})
    for (std::size_t i = 0; i < a->rows(); ++i)
      for (std::size_t j = i + 1; j < a->cols(); ++j) raw.push_back((*a)(i, j));
  return raw;
}

FileTensor to_tensor(const SymmetricFile& file) {
  const std::size_t m = file.S1.rows();
  const SymBasis& b = sym_basis(m, 2);
  FileTensor out{std::vector<Elem>(2 * b.size(), 0)};
  std::size_t block = 0;
  for (const Matrix* s : {&file.S1, &file.S2}) {
    for (std::size_t idx = 0; idx < b.size(); ++idx) {
      const auto t = b.tuple(idx);
      out.coords[block * b.size() + idx] = (*s)(t[0], t[1]);
    }
    ++block;
  }
  return out;
}

FileTensor to_tensor(const SkewFile& file) {
  const std::size_t k = file.A1.rows();
  const ExtBasis& b = ext_basis(k, 2);
  FileTensor out{std::vector<Elem>(2 * b.size(), 0)};
  std::size_t block = 0;
  for (const Matrix* a : {&file.A1, &file.A2}) {
    for (std::size_t idx = 0; idx < b.size(); ++idx) {
      const auto t = b.tuple(idx);
      out.coords[block * b.size() + idx] = (*a)(t[0], t[1]);
    }
    ++block;
  }
  return out;
}

std::vector<Elem> pm_node(const SymmetricFile& file, Elem xi, std::span<const Elem> y) {
  return combine(file.S1.field(), row_times(file.S1, y), xi, row_times(file.S2, y));
}

Elem pm_help(const SymmetricFile& file, Elem xi_h, std::span<const Elem> y_h, std::span<const Elem> y_f) {
  return dot(file.S1.field(), pm_node(file, xi_h, y_h), y_f);
}

SymmetricFile pm_download(const Field& f, const std::vector<std::vector<Elem>>& nodes, const std::vector<Elem>& xis,
                          const std::vector<std::vector<Elem>>& ys) {
  const std::size_t k = nodes.size();
  if (k < 2 || xis.size() != k || ys.size() != k) throw UsageError("pm_download needs k matching nodes");
  const std::size_t m = k - 1;
  // u[i][j] = y_i S1 y_j^T, v[i][j] = y_i S2 y_j^T for i != j.
  std::vector<std::vector<Elem>> u(k, std::vector<Elem>(k, 0)), v = u;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const Elem p = dot(f, nodes[i], ys[j]), q = dot(f, nodes[j], ys[i]);
      const auto [s1, s2] = decouple(f, xis[i], 1, xis[j], p, q);
      u[i][j] = u[j][i] = s1;
      v[i][j] = v[j][i] = s2;
    }
  std::vector<std::vector<Elem>> rows1, rows2;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<Elem>> others;
    std::vector<Elem> b1, b2;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      others.push_back(ys[j]);
      b1.push_back(u[i][j]);
      b2.push_back(v[i][j]);
    }
    const Matrix Y = Matrix::from_rows(f, others);
    rows1.push_back(solve_or_violate(Y, b1, "y stars do not span").x);
    rows2.push_back(solve_or_violate(Y, b2, "y stars do not span").x);
  }
  return {recover_from_rows(f, ys, rows1, m), recover_from_rows(f, ys, rows2, m)};
}

std::vector<Elem> pm_repair(const Field& f, const std::vector<Elem>& scalars, const std::vector<Elem>& xis,
                            const std::vector<std::vector<Elem>>& ys, Elem xi_f, std::span<const Elem> y_f) {
  const std::size_t m = y_f.size();
  Matrix a(f, 0, 2 * m);
  for (std::size_t h = 0; h < scalars.size(); ++h) {
    std::vector<Elem> row(ys[h].begin(), ys[h].end());
    for (Elem e : ys[h]) row.push_back(f.mul(xis[h], e));
    a.append_row(row);
  }
  const auto z = solve_or_violate(a, scalars, "helper matrix [y, xi y] is rank deficient").x;
  return combine(f, std::span(z).first(m), xi_f, std::span(z).subspan(m));
}

std::vector<Elem> skew_node(const SkewFile& file, Elem xi, std::span<const Elem> w) {
  return combine(file.A1.field(), row_times(file.A1, w), xi, row_times(file.A2, w));
}

namespace {
std::size_t first_nonzero(std::span<const Elem> w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0) return i;
  throw DomainError("skew star vector is zero");
}
}  // namespace

std::vector<Elem> skew_compress(std::span<const Elem> node, std::span<const Elem> w) {
  const std::size_t p = first_nonzero(w);
  std::vector<Elem> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    if (i != p) out.push_back(node[i]);
  return out;
}

std::vector<Elem> skew_expand(const Field& f, std::span<const Elem> stored, std::span<const Elem> w) {
  const std::size_t p = first_nonzero(w);
  std::vector<Elem> out(w.size(), 0);
  Elem acc = 0;
  for (std::size_t i = 0, s = 0; i < w.size(); ++i) {
    if (i == p) continue;
    out[i] = stored[s++];
    acc = f.add(acc, f.mul(out[i], w[i]));
  }
  out[p] = f.neg(f.div(acc, w[p]));
  return out;
}

SkewFile skew_download(const Field& f, const std::vector<std::vector<Elem>>& stored, const std::vector<Elem>& xis,
                       const std::vector<std::vector<Elem>>& ws) {
  const std::size_t k = stored.size();
  if (k < 2 || xis.size() != k || ws.size() != k) throw UsageError("skew_download needs k matching nodes");
  std::vector<std::vector<Elem>> nodes;
  for (std::size_t i = 0; i < k; ++i) nodes.push_back(skew_expand(f, stored[i], ws[i]));
  std::vector<std::vector<Elem>> u(k, std::vector<Elem>(k, 0)), v = u;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      // node_i·w_j = u + ξ_i v and node_j·w_i = -u - ξ_j v, where u = w_i A1 w_j^T.
      const Elem p = dot(f, nodes[i], ws[j]), q = dot(f, nodes[j], ws[i]);
      const auto [s1, s2] = decouple(f, xis[i], f.neg(1), f.neg(xis[j]), p, q);
      u[i][j] = s1;
      v[i][j] = s2;
      u[j][i] = f.neg(s1);
      v[j][i] = f.neg(s2);
    }
  std::vector<std::vector<Elem>> rows1, rows2;
  const Matrix W = Matrix::from_rows(f, ws);
  for (std::size_t i = 0; i < k; ++i) {
    // w_i A w_j^T for all j (diagonal 0) determines w_i A against a basis.
    rows1.push_back(solve_or_violate(W, u[i], "w stars do not span").x);
    rows2.push_back(solve_or_violate(W, v[i], "w stars do not span").x);
  }
  return {recover_from_rows(f, ws, rows1, k), recover_from_rows(f, ws, rows2, k)};
}

Elem skew_help(const Field& f, std::span<const Elem> node, std::span<const Elem> w_f) { return dot(f, node, w_f); }

std::vector<Elem> skew_repair(const Field& f, const std::vector<Elem>& scalars, const std::vector<Elem>& xis,
                              const std::vector<std::vector<Elem>>& ws, Elem xi_f, std::span<const Elem> w_f) {
  const std::size_t k = w_f.size();
  Matrix a(f, 0, 2 * k);
  std::vector<Elem> b = scalars;
  for (std::size_t h = 0; h < scalars.size(); ++h) {
    std::vector<Elem> row(ws[h].begin(), ws[h].end());
    for (Elem e : ws[h]) row.push_back(f.mul(xis[h], e));
    a.append_row(row);
  }
  std::vector<Elem> known(2 * k, 0);
  std::copy(w_f.begin(), w_f.end(), known.begin());
  a.append_row(known);
  std::fill(known.begin(), known.end(), 0);
  std::copy(w_f.begin(), w_f.end(), known.begin() + k);
  a.append_row(known);
  b.push_back(0);
  b.push_back(0);
  // z = [A1 w_f^T; A2 w_f^T], and w_f A = -(A w_f^T)^T for skew A.
  const auto z = solve_or_violate(a, b, "helper matrix fails the quotient spanning condition").x;
  auto out = combine(f, std::span(z).first(k), xi_f, std::span(z).subspan(k));
  for (Elem& e : out) e = f.neg(e);
  return out;
}

std::size_t bordered_vandermonde_rank(const Field& f, std::size_t k, const std::vector<Elem>& helper_points,
                                      Elem failed_point) {
  const auto w_of = [&](Elem a) {
    std::vector<Elem> w(k);
    for (std::size_t i = 0; i < k; ++i) w[i] = f.pow(a, static_cast<long long>(i));
    return w;
  };
  Matrix cols(f, 0, 2 * k);
  for (Elem a : helper_points) {
    auto w = w_of(a);
    const Elem xi = f.pow(a, static_cast<long long>(k - 1));
    std::vector<Elem> c = w;
    for (Elem e : w) c.push_back(f.mul(xi, e));
    cols.append_row(c);
  }
  const auto wf = w_of(failed_point);
  std::vector<Elem> c(2 * k, 0);
  std::copy(wf.begin(), wf.end(), c.begin());
  cols.append_row(c);
  std::fill(c.begin(), c.end(), 0);
  std::copy(wf.begin(), wf.end(), c.begin() + k);
  cols.append_row(c);
  return rank(cols);
}

}  // namespace atrahasis::pm
