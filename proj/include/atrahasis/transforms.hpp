#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "atrahasis/msr_code.hpp"

namespace atrahasis {

/// A base code with δ nodes retired: their contents are forced to zero, which
/// leaves an (n-δ, k-δ, d-δ, α) code over the remaining "live" nodes.
/// Node indices in this interface are live indices 0..n-δ-1. δ = 0 is the
/// base code itself with the identity encoder.
class ShortenedCode {
 public:
  /// `pinned` lists base node indices; throws UsageError for δ >= k or bad
  /// indices, AxiomViolation when the pinned node bases are dependent.
  ShortenedCode(std::shared_ptr<const MsrCode> base, std::vector<std::size_t> pinned);

  const MsrCode& base() const { return *base_; }
  std::shared_ptr<const MsrCode> base_ptr() const { return base_; }
  const Field& field() const { return base_->field(); }
  /// Shortened (n, k, d, M); α, β, t and flavor are the base code's.
  const CodeParams& params() const { return params_; }
  std::size_t depth() const { return pinned_.size(); }
  /// Sorted base indices of the retired nodes.
  const std::vector<std::size_t>& pinned() const { return pinned_; }
  /// Base index of live node i.
  std::size_t base_index(std::size_t i) const;

  /// Retires the last `delta` live nodes as well.
  ShortenedCode shorten(std::size_t delta) const;

  /// M x M', M' = (k-δ)α. Columns span the files whose pinned contents vanish;
  /// rows `free_cols()` form the identity, so the map is systematic.
  const Matrix& generator() const { return generator_; }
  const std::vector<std::size_t>& free_cols() const { return free_cols_; }

  FileTensor encode(std::span<const Elem> user) const;
  std::vector<Elem> decode_user(const FileTensor& file) const;

  NodeContent node_content(const FileTensor& file, std::size_t i) const;
  /// Returns the user symbols. Needs k-δ distinct live nodes.
  std::vector<Elem> download(const std::vector<NodeContent>& contents) const;
  HelpMessage help(const NodeContent& helper_content, std::size_t f) const;
  /// Pinned nodes' messages are simulated locally as zeros.
  NodeContent repair(std::size_t f, const std::vector<HelpMessage>& messages) const;

  /// α x M': node contents = G_i · user symbols.
  Matrix node_encoder(std::size_t i) const;
  /// β x α.
  Matrix help_encoder(std::size_t h, std::size_t f) const;
  /// α x (|helpers|·β), live helpers only.
  Matrix repair_combiner(std::size_t f, const std::vector<std::size_t>& helpers) const;
  /// M' x ((k-δ)·α): user symbols from exactly k-δ live nodes.
  Matrix download_decoder(const std::vector<std::size_t>& nodes) const;

 private:
  void check_live(std::size_t i) const;

  std::shared_ptr<const MsrCode> base_;
  std::vector<std::size_t> pinned_;
  std::vector<std::size_t> live_;
  CodeParams params_;
  Matrix generator_;
  std::vector<std::size_t> free_cols_;
};

/// Pins the last δ base nodes.
ShortenedCode shorten(std::shared_ptr<const MsrCode> base, std::size_t delta);

// ---------------------------------------------------------------------------
// Two simultaneous failures repaired through a central agent (t = 3 symmetric).

enum class TwoRepairStrategy { Naive, Cascade, Subspace };

std::string to_string(TwoRepairStrategy s);
TwoRepairStrategy parse_two_repair_strategy(const std::string& s);

std::size_t naive_two_bandwidth(std::size_t k, std::size_t d);
std::size_t cascade_two_bandwidth(std::size_t k, std::size_t d);
std::size_t subspace_two_bandwidth(std::size_t k);
/// Cut-set lower bound 2dα/(d+2-k) as numerator / denominator (not reduced).
std::pair<std::size_t, std::size_t> two_failure_cut_set(std::size_t k, std::size_t d, std::size_t alpha);

struct CentralRepairPlan {
  std::size_t f = 0, g = 0;
  TwoRepairStrategy strategy = TwoRepairStrategy::Naive;
  std::vector<std::size_t> helpers;
  /// Per helper: (symbols sent) x α, applied to that helper's content.
  std::vector<Matrix> encoders;
  /// α x total_bandwidth, applied to all sent symbols in helper order.
  Matrix combine_f, combine_g;
  std::size_t total_bandwidth = 0;
};

/// Throws UsageError unless the code is t = 3 symmetric, f != g and the d
/// helpers are distinct and disjoint from {f, g}; fewer than d helpers give
/// InsufficientNodes.
CentralRepairPlan plan_central_repair_two(const MsrCode& code, std::size_t f, std::size_t g,
                                          const std::vector<std::size_t>& helpers, TwoRepairStrategy strategy);

struct TwoRepairResult {
  NodeContent f, g;
  std::size_t bandwidth = 0;
};

/// Helper contents in any order; they determine the helper set.
TwoRepairResult central_repair_two(const MsrCode& code, std::size_t f, std::size_t g,
                                   const std::vector<NodeContent>& helper_contents, TwoRepairStrategy strategy);

/// Runs a prepared plan; contents must follow plan.helpers order.
TwoRepairResult run_central_repair(const CentralRepairPlan& plan, const std::vector<std::vector<Elem>>& helper_values);

}  // namespace atrahasis
