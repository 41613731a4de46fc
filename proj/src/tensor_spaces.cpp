#include "atrahasis/tensor_spaces.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "atrahasis/linalg.hpp"

namespace atrahasis {

std::uint64_t binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (long long i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

MonomialBasis::MonomialBasis(Kind kind, std::size_t n, int q) : kind_(kind), n_(n), q_(q) {
  if (q < 0) {
    q_ = 0;  // the zero space; tuple() is never called
    return;
  }
  const std::size_t big = kind == Kind::Symmetric ? n + q - (q > 0 ? 1 : 0) : n;
  if (kind == Kind::Symmetric && n == 0 && q > 0) return;
  size_ = binomial(static_cast<long long>(big), q);
  if (q == 0) {
    size_ = 1;
    return;
  }
  if (size_ == 0) return;
  tuples_.reserve(size_ * q);
  // Increasing combinations c over [big], mapped back to tuples.
  std::vector<std::uint32_t> c(q);
  for (int j = 0; j < q; ++j) c[j] = j;
  while (true) {
    for (int j = 0; j < q; ++j) tuples_.push_back(kind == Kind::Symmetric ? c[j] - j : c[j]);
    int j = q - 1;
    while (j >= 0 && c[j] == big - q + j) --j;
    if (j < 0) break;
    ++c[j];
    for (int l = j + 1; l < q; ++l) c[l] = c[l - 1] + 1;
  }
}

std::size_t MonomialBasis::index_of(std::span<const std::uint32_t> t) const {
  const long long big = kind_ == Kind::Symmetric ? static_cast<long long>(n_) + q_ - 1 : static_cast<long long>(n_);
  std::size_t rank = 0;
  long long prev = -1;
  for (int j = 0; j < q_; ++j) {
    const long long c = kind_ == Kind::Symmetric ? t[j] + j : t[j];
    for (long long v = prev + 1; v < c; ++v) rank += binomial(big - 1 - v, q_ - 1 - j);
    prev = c;
  }
  return rank;
}

namespace {

template <class B>
const B& cached(std::size_t n, int q) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, std::unique_ptr<B>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, q}];
  if (!slot) slot = std::make_unique<B>(n, q);
  return *slot;
}

void check_lengths(std::size_t n, const std::vector<std::span<const Elem>>& vectors) {
  for (const auto& v : vectors) {
    if (v.size() != n) throw UsageError("tensor factor has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
  }
}

}  // namespace

const SymBasis& sym_basis(std::size_t m, int q) { return cached<SymBasis>(m, q); }
const ExtBasis& ext_basis(std::size_t k, int q) { return cached<ExtBasis>(k, q); }

Coords expand_sym(const Field& f, std::size_t m, const std::vector<std::span<const Elem>>& vectors) {
  check_lengths(m, vectors);
  Coords cur{1};
  std::vector<std::uint32_t> buf;
  for (std::size_t deg = 0; deg < vectors.size(); ++deg) {
    const SymBasis& from = sym_basis(m, static_cast<int>(deg));
    const SymBasis& to = sym_basis(m, static_cast<int>(deg + 1));
    const auto& v = vectors[deg];
    Coords next(to.size(), 0);
    for (std::size_t s = 0; s < from.size(); ++s) {
      if (cur[s] == 0) continue;
      const auto t = from.tuple(s);
      for (std::uint32_t i = 0; i < m; ++i) {
        if (v[i] == 0) continue;
        buf.assign(t.begin(), t.end());
        buf.insert(std::upper_bound(buf.begin(), buf.end(), i), i);
        const std::size_t idx = to.index_of(buf);
        next[idx] = f.add(next[idx], f.mul(cur[s], v[i]));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Coords expand_ext(const Field& f, std::size_t k, const std::vector<std::span<const Elem>>& vectors) {
  check_lengths(k, vectors);
  if (vectors.size() > k) return {};
  Coords cur{1};
  std::vector<std::uint32_t> buf;
  for (std::size_t deg = 0; deg < vectors.size(); ++deg) {
    const ExtBasis& from = ext_basis(k, static_cast<int>(deg));
    const ExtBasis& to = ext_basis(k, static_cast<int>(deg + 1));
    const auto& v = vectors[deg];
    Coords next(to.size(), 0);
    for (std::size_t s = 0; s < from.size(); ++s) {
      if (cur[s] == 0) continue;
      const auto t = from.tuple(s);
      for (std::uint32_t i = 0; i < k; ++i) {
        if (v[i] == 0) continue;
        const auto pos = std::lower_bound(t.begin(), t.end(), i);
        if (pos != t.end() && *pos == i) continue;
        // Moving e_i from the right end past the larger indices.
        const auto larger = t.end() - pos;
        buf.assign(t.begin(), t.end());
        buf.insert(buf.begin() + (pos - t.begin()), i);
        const std::size_t idx = to.index_of(buf);
        Elem term = f.mul(cur[s], v[i]);
        if (larger % 2) term = f.neg(term);
        next[idx] = f.add(next[idx], term);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Coords tensor_with_x(const Field& f, std::span<const Elem> x, std::span<const Elem> s) {
  Coords out(x.size() * s.size(), 0);
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] == 0) continue;
    for (std::size_t j = 0; j < s.size(); ++j) out[a * s.size() + j] = f.mul(x[a], s[j]);
  }
  return out;
}

namespace {

std::vector<std::vector<Elem>> unit_vectors(std::size_t n) {
  std::vector<std::vector<Elem>> e(n, std::vector<Elem>(n, 0));
  for (std::size_t i = 0; i < n; ++i) e[i][i] = 1;
  return e;
}

template <class Expand>
std::vector<Coords> family(const Field& f, std::span<const Elem> x, std::span<const Elem> lead, const MonomialBasis& basis,
                           const std::vector<std::span<const Elem>>& extra, Expand expand) {
  const auto units = unit_vectors(lead.size());
  std::vector<Coords> rows;
  rows.reserve(basis.size());
  std::vector<std::span<const Elem>> factors;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    factors.assign(1, lead);
    for (std::uint32_t i : basis.tuple(j)) factors.emplace_back(units[i]);
    factors.insert(factors.end(), extra.begin(), extra.end());
    rows.push_back(tensor_with_x(f, x, expand(f, lead.size(), factors)));
  }
  return rows;
}

}  // namespace

std::vector<Coords> sym_family(const Field& f, std::span<const Elem> x, std::span<const Elem> y, int q,
                               const std::vector<std::span<const Elem>>& extra) {
  if (q < 0) return {};
  return family(f, x, y, sym_basis(y.size(), q), extra, expand_sym);
}

std::vector<Coords> ext_family(const Field& f, std::span<const Elem> x, std::span<const Elem> w, int q,
                               const std::vector<std::span<const Elem>>& extra) {
  if (q < 0) return {};
  return family(f, x, w, ext_basis(w.size(), q), extra, expand_ext);
}

std::vector<Coords> expand_node_basis_sym(const Field& f, std::span<const Elem> x, std::span<const Elem> y) {
  return sym_family(f, x, y, static_cast<int>(x.size()) - 1);
}

std::vector<Coords> rank_filter(const Field& f, std::vector<Coords> rows) {
  if (rows.empty()) return rows;
  SpanBasis sb(f, rows.front().size());
  std::vector<Coords> kept;
  for (auto& r : rows) {
    if (sb.insert(r)) kept.push_back(std::move(r));
  }
  return kept;
}

std::vector<Coords> expand_node_basis_ext(const Field& f, std::span<const Elem> x, std::span<const Elem> w) {
  if (std::all_of(w.begin(), w.end(), [](Elem e) { return e == 0; }))
    throw DomainError("exterior star vector is zero");
  return rank_filter(f, ext_family(f, x, w, static_cast<int>(x.size()) - 1));
}

}  // namespace atrahasis
