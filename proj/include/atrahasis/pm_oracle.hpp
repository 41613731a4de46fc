#pragma once

#include <span>
#include <vector>

#include "atrahasis/linalg.hpp"
#include "atrahasis/msr_code.hpp"

// Classical product-matrix construction with d = 2(k-1), kept independent of
// the tensor machinery so it can serve as a cross-check for t = 2.
namespace atrahasis::pm {

/// Two symmetric (k-1) x (k-1) matrices.
struct SymmetricFile {
  Matrix S1, S2;
};

/// Two k x k matrices with w·A·w^T = 0 for every w (skew, zero diagonal).
struct SkewFile {
  Matrix A1, A2;
};

/// raw has k(k-1) symbols: S1's upper triangle (i <= j) row-major, then S2's.
SymmetricFile pack_symmetric(const Field& f, std::size_t k, std::span<const Elem> raw);
std::vector<Elem> unpack_symmetric(const SymmetricFile& file);
/// raw has k(k-1) symbols: A1's strict upper triangle row-major, then A2's.
SkewFile pack_skew(const Field& f, std::size_t k, std::span<const Elem> raw);
std::vector<Elem> unpack_skew(const SkewFile& file);

/// Coordinates of the same file as φ on X ⊗ S^2Y (X-major) or X ⊗ Λ^2W,
/// under x_h = [1, ξ_h]: φ(e_b ⊗ ȳ_i ⊙ ȳ_j) = S_b[i][j] and φ(e_b ⊗ w̄_i ∧ w̄_j) = A_b[i][j].
FileTensor to_tensor(const SymmetricFile& file);
FileTensor to_tensor(const SkewFile& file);

/// y S1 + ξ y S2.
std::vector<Elem> pm_node(const SymmetricFile& file, Elem xi, std::span<const Elem> y);
/// (y_h S1 + ξ_h y_h S2) y_f^T.
Elem pm_help(const SymmetricFile& file, Elem xi_h, std::span<const Elem> y_h, std::span<const Elem> y_f);
/// Recovers S1, S2 from k node vectors by pairwise decoupling. Throws
/// AxiomViolation when two ξ coincide or the y's do not span.
SymmetricFile pm_download(const Field& f, const std::vector<std::vector<Elem>>& nodes, const std::vector<Elem>& xis,
                          const std::vector<std::vector<Elem>>& ys);
/// Rebuilds y_f S1 + ξ_f y_f S2 from d scalars via the d x d system [y_h, ξ_h y_h].
std::vector<Elem> pm_repair(const Field& f, const std::vector<Elem>& scalars, const std::vector<Elem>& xis,
                            const std::vector<std::vector<Elem>>& ys, Elem xi_f, std::span<const Elem> y_f);

/// w A1 + ξ w A2 (length k; orthogonal to w).
std::vector<Elem> skew_node(const SkewFile& file, Elem xi, std::span<const Elem> w);
/// Drops the coordinate at w's first nonzero entry: k-1 stored symbols.
std::vector<Elem> skew_compress(std::span<const Elem> node, std::span<const Elem> w);
/// Inverse of skew_compress using node · w^T = 0.
std::vector<Elem> skew_expand(const Field& f, std::span<const Elem> stored, std::span<const Elem> w);
/// Recovers A1, A2 from k compressed node vectors.
SkewFile skew_download(const Field& f, const std::vector<std::vector<Elem>>& stored, const std::vector<Elem>& xis,
                       const std::vector<std::vector<Elem>>& ws);
/// Help scalar from the helper's full node vector: node · w_f^T.
Elem skew_help(const Field& f, std::span<const Elem> node, std::span<const Elem> w_f);
/// Rebuilds w_f A1 + ξ_f w_f A2 from d scalars plus the two known-zero rows [w_f 0], [0 w_f].
std::vector<Elem> skew_repair(const Field& f, const std::vector<Elem>& scalars, const std::vector<Elem>& xis,
                              const std::vector<std::vector<Elem>>& ws, Elem xi_f, std::span<const Elem> w_f);

/// Rank of the 2k x 2k matrix with columns [w_h, ξ_h w_h] for the helper points
/// plus [w_f, 0] and [0, w_f], all from w = [1, a, ..., a^{k-1}], ξ = a^{k-1}.
std::size_t bordered_vandermonde_rank(const Field& f, std::size_t k, const std::vector<Elem>& helper_points, Elem failed_point);

}  // namespace atrahasis::pm
