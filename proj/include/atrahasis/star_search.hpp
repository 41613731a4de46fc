#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "atrahasis/msr_code.hpp"

namespace atrahasis {

/// The (9,5,6,6) code over GF(16) = F2[z]/(z^4+z+1): points
/// 0, z^3, z^6, z^-3, z^-6, z^-1, z^-2, z^-4, z^-8 with x = [1, a^2, a^6], y = [1, a, a^3].
StarFamily fixture_atrahasis_956();

struct SearchConfig {
  const Field* field = nullptr;
  std::size_t k = 0, d = 0;
  Flavor flavor = Flavor::Symmetric;
  /// Exponents e with x_h = [a^{e_1}, ...]; t entries. Empty means default_x_pattern.
  std::vector<unsigned> x_pattern;
  /// Exponents for y (k-t+1 entries) or w (k entries). Empty means the default.
  std::vector<unsigned> second_pattern;
  /// Stop once the pool reaches this size.
  std::optional<std::size_t> max_pool;
};

/// x = [a^0, a^{k-t+1}, a^{2(k-t+1)}, ...]; at t = 2 this is [1, a^{k-1}].
std::vector<unsigned> default_x_pattern(std::size_t k, std::size_t t);
/// y = [1, a, ..., a^{k-t}] or w = [1, a, ..., a^{k-1}].
std::vector<unsigned> default_second_pattern(std::size_t k, std::size_t t, Flavor flavor);

struct PoolResult {
  std::vector<Elem> points;
  std::optional<StarFamily> family;  // present when found
  bool found = false;
  std::string diagnostic;
};

/// Scans field elements in enumeration order and keeps a point iff every axiom
/// subset touching it still holds. No backtracking; deterministic.
/// Fails (found = false) when the pool cannot reach d+1 nodes.
PoolResult grow_pool(const SearchConfig& cfg);

enum class Verdict { NonzeroWitnessed, Inconclusive };
std::string to_string(Verdict v);

struct WitnessReport {
  std::size_t k = 0, d = 0, t = 0, alpha = 0;
  Flavor flavor = Flavor::Symmetric;
  std::uint32_t field_order = 0;
  std::uint64_t seed = 0;
  std::size_t draws = 0;    // evaluations performed
  std::size_t redraws = 0;  // draws - 1 when witnessed, draws when inconclusive
  Verdict verdict = Verdict::Inconclusive;
  std::size_t matrix_rows = 0, matrix_cols = 0;
  /// Symmetric: the determinant. Exterior: the rank reached.
  Elem determinant = 0;
  std::size_t rank = 0;
  /// The evaluation point: d x-vectors and d second vectors (exterior: plus w_f last).
  std::vector<std::vector<Elem>> x_point, second_point;
};

/// Draws random star vectors over a prime field and evaluates the repair-axiom
/// matrix: for the symmetric flavor the dβ x dβ determinant of the stacked
/// x_i ⊗ y_i ⊙ η_j; for the exterior flavor the rank of the d helper blocks plus
/// X ⊗ w_f ∧ Λ^{t-2}W. Redraws on failure up to max_redraws times.
WitnessReport nullstellensatz_witness(std::size_t k, std::size_t d, Flavor flavor, const Field& witness_field,
                                      std::uint64_t seed, std::size_t max_redraws);

/// Recomputes the matrix at the recorded point; true iff it is full rank.
bool replay_witness(const WitnessReport& report, const Field& witness_field);

struct SweepCase {
  std::size_t k, d, t, alpha;
};
/// Every (k, d, t) with integral t >= 2, α <= alpha_cap and k <= max_k, ordered
/// by (alpha, k, d). The t = k family has α = 1 for every k, hence the k bound.
std::vector<SweepCase> sweep_cases(std::size_t alpha_cap, std::size_t max_k);

/// Runs nullstellensatz_witness on every sweep case; each case derives its own
/// stream from (seed, k, d, t). max_k defaults to alpha_cap + 1.
std::vector<WitnessReport> sweep_small_cases(std::size_t alpha_cap, const Field& witness_field, std::uint64_t seed,
                                             std::size_t max_redraws = 10, std::optional<std::size_t> max_k = {},
                                             Flavor flavor = Flavor::Symmetric);

/// Tab-separated table: k, d, t, alpha, field, redraws, verdict.
void write_sweep_tsv(std::ostream& os, const std::vector<WitnessReport>& reports);

}  // namespace atrahasis
