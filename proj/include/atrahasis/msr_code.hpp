#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "atrahasis/finite_field.hpp"
#include "atrahasis/linalg.hpp"
#include "atrahasis/tensor_spaces.hpp"

namespace atrahasis {

enum class Flavor { Symmetric, Exterior };

std::string to_string(Flavor f);
Flavor parse_flavor(const std::string& s);

struct CodeParams {
  std::size_t n = 0, k = 0, d = 0, t = 0;
  std::size_t alpha = 0, beta = 0, M = 0;
  Flavor flavor = Flavor::Symmetric;

  /// Length of the second star vector: dim Y = k-t+1 or dim W = k.
  std::size_t second_dim() const { return flavor == Flavor::Symmetric ? k - t + 1 : k; }
  /// Dimension of the space the repair axiom must fill: X ⊗ S^{t-1}Y or X ⊗ Λ^{t-1}W.
  std::size_t repair_space_dim() const;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// Requires n-1 >= d >= k >= 2 and (d-k+1) | d; throws UsageError for the
/// former and InfeasibleParameters when t = d/(d-k+1) is not an integer.
CodeParams derive_params(std::size_t n, std::size_t k, std::size_t d, Flavor flavor);

/// Smallest δ such that (n+δ, k+δ, d+δ) has integral t, i.e. the code to shorten from.
std::size_t shortening_gap(std::size_t k, std::size_t d);

/// The 3 x 4 integer block of the (d-k+1, k-1, d, α / 1, t-1, t, β / *, *, kd, M)
/// matrix has every 2 x 2 minor over known entries equal to zero.
bool rank_one_minors_vanish(const CodeParams& p);
/// α <= 2^{k-1} and α <= (k-1)^{t-1}.
bool subpacketization_bound_holds(const CodeParams& p);
/// Throws InternalError if any MSR identity fails.
void check_invariants(const CodeParams& p);

/// Per-node star vectors. `points` records the evaluation points a_h the
/// vectors were generated from, when there are any.
struct StarFamily {
  const Field* field = nullptr;
  CodeParams params;
  std::vector<std::vector<Elem>> x_stars;
  std::vector<std::vector<Elem>> second_stars;
  std::vector<Elem> points;

  /// Shape checks; throws UsageError, or DomainError for a zero exterior w.
  void validate() const;
};

struct FileTensor {
  std::vector<Elem> coords;
};

struct NodeContent {
  std::size_t node = 0;
  std::vector<Elem> values;
};

struct HelpMessage {
  std::size_t helper = 0;
  std::size_t failed = 0;
  std::vector<Elem> values;
};

struct AxiomReport {
  bool pass = true;
  std::string axiom;                 // "MDSxt", "MDSyt", "MDSdt", "MDSwt", "MDSqt"
  std::vector<std::size_t> subset;   // offending node indices
  std::optional<std::size_t> failed; // the extra index f of MDSqt

  std::string describe() const;
};

/// Exhaustive check of every axiom subset.
AxiomReport verify_axioms(const StarFamily& stars);

/// Checks only the subsets drawn from nodes [0, count) that contain `newest`.
/// Running this for newest = 0..n-1 with count = newest+1 covers every subset once.
AxiomReport verify_axioms_touching(const StarFamily& stars, std::size_t count, std::size_t newest);

/// Systematic pre-encoding: the raw symbols become φ's coordinates.
FileTensor encode(std::span<const Elem> raw, const CodeParams& params);

/// A concrete code: star family plus cached node bases.
class MsrCode {
 public:
  explicit MsrCode(StarFamily stars);

  const StarFamily& stars() const { return stars_; }
  const CodeParams& params() const { return stars_.params; }
  const Field& field() const { return *stars_.field; }

  /// α x M; row j is the node's j-th canonical basis tensor.
  const Matrix& node_basis(std::size_t h) const;
  /// β x M; rows are the message basis tensors sent by h to repair f.
  Matrix message_basis(std::size_t h, std::size_t f) const;

  NodeContent node_content(const FileTensor& file, std::size_t h) const;
  /// Needs at least k distinct nodes. Throws InsufficientNodes with fewer,
  /// AxiomViolation if the stacked system is singular.
  FileTensor download(const std::vector<NodeContent>& contents) const;
  HelpMessage help(const NodeContent& helper_content, std::size_t f) const;
  /// Throws AxiomViolation (or InsufficientNodes below d messages) when f's
  /// basis is not covered by the received message tensors.
  NodeContent repair(std::size_t f, const std::vector<HelpMessage>& messages) const;

  /// β x α: message values = E · helper content.
  Matrix help_encoder(std::size_t h, std::size_t f) const;
  /// α x (|helpers|·β): f's content = C · concatenated messages in helper order.
  Matrix repair_combiner(std::size_t f, const std::vector<std::size_t>& helpers) const;
  /// M x (k·α): φ = D · concatenated contents of exactly k nodes, in the given order.
  Matrix download_decoder(const std::vector<std::size_t>& nodes) const;

 private:
  void check_node(std::size_t h) const;

  StarFamily stars_;
  std::vector<Matrix> node_bases_;
};

/// Evaluation points with pairwise distinct (k-1)-th powers, scanned in
/// element order. Throws InfeasibleParameters when the field has fewer than n.
std::vector<Elem> rs_points(const Field& f, std::size_t n, std::size_t k);

/// t = 2 stars: x = [1, a^{k-1}], y = [1, a, ..., a^{k-2}] (symmetric) or
/// w = [1, a, ..., a^{k-1}] (exterior); d = 2(k-1).
StarFamily rs_stars_t2(const Field& f, std::size_t n, std::size_t k, Flavor flavor);

/// Star vectors built from exponent patterns: x = [a^{e}...], second = [a^{e}...].
StarFamily stars_from_points(const Field& f, const CodeParams& params, const std::vector<Elem>& points,
                             const std::vector<unsigned>& x_pattern, const std::vector<unsigned>& second_pattern);

}  // namespace atrahasis
