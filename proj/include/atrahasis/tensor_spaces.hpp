#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "atrahasis/finite_field.hpp"

namespace atrahasis {

std::uint64_t binomial(long long n, long long k);

/// Lexicographically ordered q-tuples over [0, n) that are either
/// non-decreasing (symmetric monomials) or strictly increasing (wedges).
class MonomialBasis {
 public:
  enum class Kind { Symmetric, Exterior };

  MonomialBasis(Kind kind, std::size_t n, int q);

  Kind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  int degree() const { return q_; }
  std::size_t size() const { return size_; }
  std::span<const std::uint32_t> tuple(std::size_t i) const {
    return {tuples_.data() + i * static_cast<std::size_t>(q_), static_cast<std::size_t>(q_)};
  }
  /// Position of a sorted tuple of the right shape. No validation beyond size.
  std::size_t index_of(std::span<const std::uint32_t> t) const;

 private:
  Kind kind_;
  std::size_t n_;
  int q_;
  std::size_t size_ = 0;
  std::vector<std::uint32_t> tuples_;
};

/// Basis of S^q(F^m): all non-decreasing q-tuples over [m]; C(m+q-1, q) of them.
class SymBasis : public MonomialBasis {
 public:
  SymBasis(std::size_t m, int q) : MonomialBasis(Kind::Symmetric, m, q) {}
};

/// Basis of Λ^q(F^k): all strictly increasing q-tuples over [k]; C(k, q) of them.
class ExtBasis : public MonomialBasis {
 public:
  ExtBasis(std::size_t k, int q) : MonomialBasis(Kind::Exterior, k, q) {}
};

/// Shared immutable instances, built on first use.
const SymBasis& sym_basis(std::size_t m, int q);
const ExtBasis& ext_basis(std::size_t k, int q);

using Coords = std::vector<Elem>;

/// Coordinates of v_1 ⊙ ... ⊙ v_q in the monomial basis of S^q(F^m): the
/// coefficient of a monomial is the sum over distinct rearrangements of its
/// index multiset of Π_j v_j[σ(j)], i.e. the coefficient of the product of the
/// linear forms Σ_i v_j[i] z_i. No factorials are divided out.
Coords expand_sym(const Field& f, std::size_t m, const std::vector<std::span<const Elem>>& vectors);

/// Coordinates of v_1 ∧ ... ∧ v_q in the basis of Λ^q(F^k): the q x q minors
/// of the matrix with rows v_j, one per increasing column tuple.
Coords expand_ext(const Field& f, std::size_t k, const std::vector<std::span<const Elem>>& vectors);

/// x ⊗ s laid out X-major: block a holds x[a]·s.
Coords tensor_with_x(const Field& f, std::span<const Elem> x, std::span<const Elem> s);

/// x ⊗ (y ⊙ η_j ⊙ extra...) for every monomial η_j of SymBasis(m, q), as
/// rows. `extra` vectors are appended to every product.
std::vector<Coords> sym_family(const Field& f, std::span<const Elem> x, std::span<const Elem> y, int q,
                               const std::vector<std::span<const Elem>>& extra = {});

/// x ⊗ (w ∧ ω_j ∧ extra...) for every wedge ω_j of ExtBasis(k, q), in basis
/// order, without rank filtering.
std::vector<Coords> ext_family(const Field& f, std::span<const Elem> x, std::span<const Elem> w, int q,
                               const std::vector<std::span<const Elem>>& extra = {});

/// Rows of x ⊗ (y ⊙ S^{t-1}Y), one per monomial of SymBasis(y.size(), t-1).
std::vector<Coords> expand_node_basis_sym(const Field& f, std::span<const Elem> x, std::span<const Elem> y);

/// A maximal independent subset of x ⊗ (w ∧ ω_j), ω_j over ExtBasis(k, t-1),
/// chosen greedily in basis order; it has exactly C(k-1, t-1) rows.
/// Throws DomainError when w = 0.
std::vector<Coords> expand_node_basis_ext(const Field& f, std::span<const Elem> x, std::span<const Elem> w);

/// Greedy maximal independent subset of `rows`, in order.
std::vector<Coords> rank_filter(const Field& f, std::vector<Coords> rows);

}  // namespace atrahasis
