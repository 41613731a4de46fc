#include "atrahasis/transforms.hpp"

#include <algorithm>
#include <set>

#include "atrahasis/errors.hpp"
#include "atrahasis/tensor_spaces.hpp"

namespace atrahasis {

namespace {

Matrix left_columns(const Matrix& m, std::size_t cols) {
  Matrix out(m.field(), m.rows(), cols);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(r, c);
  }
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

}  // namespace

ShortenedCode::ShortenedCode(std::shared_ptr<const MsrCode> base, std::vector<std::size_t> pinned)
    : base_(std::move(base)), pinned_(std::move(pinned)), generator_(base_->field(), 0, 0) {
  const CodeParams& bp = base_->params();
  std::sort(pinned_.begin(), pinned_.end());
  if (std::adjacent_find(pinned_.begin(), pinned_.end()) != pinned_.end())
    throw UsageError("pinned node listed twice");
  for (std::size_t h : pinned_) {
    if (h >= bp.n) throw UsageError("pinned node " + std::to_string(h) + " out of range");
  }
  const std::size_t delta = pinned_.size();
  if (delta >= bp.k) throw UsageError("shortening depth must stay below k = " + std::to_string(bp.k));
  for (std::size_t h = 0; h < bp.n; ++h) {
    if (!std::binary_search(pinned_.begin(), pinned_.end(), h)) live_.push_back(h);
  }

  Matrix constraints(field(), 0, bp.M);
  for (std::size_t h : pinned_) {
    const Matrix& nb = base_->node_basis(h);
    for (std::size_t j = 0; j < nb.rows(); ++j) constraints.append_row(nb.row(j));
  }
  Nullspace ns = nullspace(constraints);
  if (ns.free_cols.size() != bp.M - delta * bp.alpha) {
    throw AxiomViolation("base-axiom-violation: pinned nodes {" + join(pinned_) + "} have dependent node bases");
  }
  generator_ = std::move(ns.basis);
  free_cols_ = std::move(ns.free_cols);

  params_ = bp;
  params_.n = bp.n - delta;
  params_.k = bp.k - delta;
  params_.d = bp.d - delta;
  params_.M = params_.k * bp.alpha;
}

std::size_t ShortenedCode::base_index(std::size_t i) const {
  check_live(i);
  return live_[i];
}

void ShortenedCode::check_live(std::size_t i) const {
  if (i >= live_.size()) throw UsageError("node index " + std::to_string(i) + " out of range");
}

ShortenedCode ShortenedCode::shorten(std::size_t delta) const {
  if (delta > live_.size()) throw UsageError("cannot retire more nodes than are live");
  std::vector<std::size_t> pins = pinned_;
  pins.insert(pins.end(), live_.end() - static_cast<std::ptrdiff_t>(delta), live_.end());
  return ShortenedCode(base_, std::move(pins));
}

ShortenedCode shorten(std::shared_ptr<const MsrCode> base, std::size_t delta) {
  const std::size_t n = base->params().n;
  if (delta > n) throw UsageError("cannot retire more nodes than exist");
  std::vector<std::size_t> pins;
  for (std::size_t h = n - delta; h < n; ++h) pins.push_back(h);
  return ShortenedCode(std::move(base), std::move(pins));
}

FileTensor ShortenedCode::encode(std::span<const Elem> user) const {
  if (user.size() != params_.M)
    throw UsageError("encode expects " + std::to_string(params_.M) + " symbols, got " + std::to_string(user.size()));
  return FileTensor{generator_.apply(user)};
}

std::vector<Elem> ShortenedCode::decode_user(const FileTensor& file) const {
  if (file.coords.size() != base_->params().M) throw UsageError("file tensor has the wrong length");
  std::vector<Elem> user;
  user.reserve(free_cols_.size());
  for (std::size_t c : free_cols_) user.push_back(file.coords[c]);
  return user;
}

NodeContent ShortenedCode::node_content(const FileTensor& file, std::size_t i) const {
  check_live(i);
  return NodeContent{i, base_->node_content(file, live_[i]).values};
}

std::vector<Elem> ShortenedCode::download(const std::vector<NodeContent>& contents) const {
  std::set<std::size_t> seen;
  std::vector<NodeContent> mapped;
  for (const auto& c : contents) {
    check_live(c.node);
    seen.insert(c.node);
    mapped.push_back(NodeContent{live_[c.node], c.values});
  }
  if (seen.size() < params_.k) {
    throw InsufficientNodes("download needs " + std::to_string(params_.k) + " distinct nodes, got " +
                            std::to_string(seen.size()) + " (short by " + std::to_string(params_.k - seen.size()) +
                            ")");
  }
  for (std::size_t h : pinned_) mapped.push_back(NodeContent{h, std::vector<Elem>(params_.alpha, 0)});
  return decode_user(base_->download(mapped));
}

HelpMessage ShortenedCode::help(const NodeContent& helper_content, std::size_t f) const {
  check_live(helper_content.node);
  check_live(f);
  HelpMessage m = base_->help(NodeContent{live_[helper_content.node], helper_content.values}, live_[f]);
  return HelpMessage{helper_content.node, f, std::move(m.values)};
}

NodeContent ShortenedCode::repair(std::size_t f, const std::vector<HelpMessage>& messages) const {
  check_live(f);
  std::vector<HelpMessage> mapped;
  for (const auto& m : messages) {
    check_live(m.helper);
    if (m.failed != f) throw UsageError("help message addressed to node " + std::to_string(m.failed));
    mapped.push_back(HelpMessage{live_[m.helper], live_[f], m.values});
  }
  for (std::size_t h : pinned_) mapped.push_back(HelpMessage{h, live_[f], std::vector<Elem>(params_.beta, 0)});
  return NodeContent{f, base_->repair(live_[f], mapped).values};
}

Matrix ShortenedCode::node_encoder(std::size_t i) const {
  check_live(i);
  return base_->node_basis(live_[i]) * generator_;
}

Matrix ShortenedCode::help_encoder(std::size_t h, std::size_t f) const {
  check_live(h);
  check_live(f);
  return base_->help_encoder(live_[h], live_[f]);
}

Matrix ShortenedCode::repair_combiner(std::size_t f, const std::vector<std::size_t>& helpers) const {
  check_live(f);
  std::vector<std::size_t> all;
  for (std::size_t h : helpers) {
    check_live(h);
    all.push_back(live_[h]);
  }
  all.insert(all.end(), pinned_.begin(), pinned_.end());
  // Pinned messages are zero, so their columns drop out.
  return left_columns(base_->repair_combiner(live_[f], all), helpers.size() * params_.beta);
}

Matrix ShortenedCode::download_decoder(const std::vector<std::size_t>& nodes) const {
  if (nodes.size() != params_.k) throw InsufficientNodes("download plan needs exactly k nodes");
  std::vector<std::size_t> all;
  for (std::size_t h : nodes) {
    check_live(h);
    all.push_back(live_[h]);
  }
  all.insert(all.end(), pinned_.begin(), pinned_.end());
  const Matrix full = base_->download_decoder(all);
  const Matrix user_rows = full.select_rows(free_cols_);
  return left_columns(user_rows, params_.k * params_.alpha);
}

// ---------------------------------------------------------------------------

std::string to_string(TwoRepairStrategy s) {
  switch (s) {
    case TwoRepairStrategy::Naive: return "naive";
    case TwoRepairStrategy::Cascade: return "cascade";
    case TwoRepairStrategy::Subspace: return "subspace";
  }
  return "?";
}

TwoRepairStrategy parse_two_repair_strategy(const std::string& s) {
  if (s == "naive") return TwoRepairStrategy::Naive;
  if (s == "cascade") return TwoRepairStrategy::Cascade;
  if (s == "subspace") return TwoRepairStrategy::Subspace;
  throw UsageError("unknown two-failure strategy '" + s + "'");
}

std::size_t naive_two_bandwidth(std::size_t k, std::size_t d) { return d * (2 * k - 5); }

std::size_t cascade_two_bandwidth(std::size_t k, std::size_t d) { return (d - 1) * (2 * k - 5) + (k - 2); }

std::size_t subspace_two_bandwidth(std::size_t k) { return 3 * (k - 2) * (k - 2); }

std::pair<std::size_t, std::size_t> two_failure_cut_set(std::size_t k, std::size_t d, std::size_t alpha) {
  return {2 * d * alpha, d + 2 - k};
}

namespace {

/// Rows of x_h ⊗ y_h ⊙ Y ⊙ <y_f, y_g>, reduced to a basis.
std::vector<Coords> pair_restriction(const MsrCode& code, std::size_t h, std::size_t f, std::size_t g) {
  const auto& s = code.stars();
  const Field& fld = code.field();
  auto rows = sym_family(fld, s.x_stars[h], s.second_stars[h], 1, {std::span<const Elem>(s.second_stars[f])});
  auto more = sym_family(fld, s.x_stars[h], s.second_stars[h], 1, {std::span<const Elem>(s.second_stars[g])});
  rows.insert(rows.end(), more.begin(), more.end());
  return rank_filter(fld, std::move(rows));
}

/// Expresses each tensor in helper h's node basis coordinates.
Matrix encoder_for(const MsrCode& code, std::size_t h, const std::vector<Coords>& tensors) {
  const auto& p = code.params();
  SpanBasis sb(code.field(), p.M);
  const Matrix& nb = code.node_basis(h);
  for (std::size_t j = 0; j < nb.rows(); ++j) sb.insert(nb.row(j));
  Matrix enc(code.field(), 0, p.alpha);
  for (const auto& v : tensors) {
    auto c = sb.express(v);
    if (!c) throw InternalError("requested tensor lies outside the helper's node subspace");
    enc.append_row(*c);
  }
  return enc;
}

/// α x |generators| combiner expressing node `target`'s basis over `gens`.
Matrix combiner_over(const MsrCode& code, std::size_t target, const std::vector<Coords>& gens,
                     const std::string& context) {
  SpanBasis sb(code.field(), code.params().M);
  for (const auto& v : gens) sb.insert(v);
  const Matrix& nb = code.node_basis(target);
  Matrix comb(code.field(), 0, gens.size());
  for (std::size_t j = 0; j < nb.rows(); ++j) {
    auto c = sb.express(nb.row(j));
    if (!c) throw AxiomViolation(context + " do not cover node " + std::to_string(target));
    comb.append_row(*c);
  }
  return comb;
}

}  // namespace

CentralRepairPlan plan_central_repair_two(const MsrCode& code, std::size_t f, std::size_t g,
                                          const std::vector<std::size_t>& helpers, TwoRepairStrategy strategy) {
  const auto& p = code.params();
  if (p.flavor != Flavor::Symmetric || p.t != 3) throw UsageError("two-failure repair needs a t = 3 symmetric code");
  if (f >= p.n || g >= p.n) throw UsageError("failed node out of range");
  if (f == g) throw UsageError("the two failed nodes must differ");
  std::set<std::size_t> seen;
  for (std::size_t h : helpers) {
    if (h >= p.n) throw UsageError("helper " + std::to_string(h) + " out of range");
    if (h == f || h == g) throw UsageError("helper " + std::to_string(h) + " is one of the failed nodes");
    if (!seen.insert(h).second) throw UsageError("helper " + std::to_string(h) + " listed twice");
  }
  if (helpers.size() < p.d)
    throw InsufficientNodes("two-failure repair needs d = " + std::to_string(p.d) + " helpers, got " +
                            std::to_string(helpers.size()));
  if (helpers.size() > p.d) throw UsageError("two-failure repair takes exactly d helpers");

  const Field& fld = code.field();
  CentralRepairPlan plan{f, g, strategy, helpers, {}, Matrix(fld, 0, 0), Matrix(fld, 0, 0), 0};
  std::vector<Coords> sent;
  std::size_t first_part = 0;  // cascade: symbols from all but the last helper

  for (std::size_t i = 0; i < helpers.size(); ++i) {
    const std::size_t h = helpers[i];
    std::vector<Coords> rows;
    if (strategy == TwoRepairStrategy::Cascade && i + 1 == helpers.size()) {
      first_part = sent.size();
      const Matrix msg = code.message_basis(h, f);
      for (std::size_t r = 0; r < msg.rows(); ++r) rows.emplace_back(msg.row(r).begin(), msg.row(r).end());
    } else {
      rows = pair_restriction(code, h, f, g);
    }
    if (strategy == TwoRepairStrategy::Subspace) {
      // Keep only what enlarges the agent's span so far.
      std::vector<Coords> kept;
      SpanBasis sb(fld, p.M);
      for (const auto& v : sent) sb.insert(v);
      for (auto& v : rows) {
        if (sb.insert(v)) kept.push_back(std::move(v));
      }
      rows = std::move(kept);
    }
    plan.encoders.push_back(encoder_for(code, h, rows));
    sent.insert(sent.end(), rows.begin(), rows.end());
  }
  plan.total_bandwidth = sent.size();
  const std::string context = "messages from helpers {" + join(helpers) + "}";
  plan.combine_f = combiner_over(code, f, sent, context);

  if (strategy != TwoRepairStrategy::Cascade) {
    plan.combine_g = combiner_over(code, g, sent, context);
    return plan;
  }

  // Cascade: g is repaired from the first d-1 helpers plus the rebuilt f.
  std::vector<Coords> gens(sent.begin(), sent.begin() + static_cast<std::ptrdiff_t>(first_part));
  const Matrix fg = code.message_basis(f, g);
  for (std::size_t r = 0; r < fg.rows(); ++r) gens.emplace_back(fg.row(r).begin(), fg.row(r).end());
  const Matrix c = combiner_over(code, g, gens, context + " and rebuilt node " + std::to_string(f));
  // f's message to g, as a function of everything sent: E_fg · combine_f.
  const Matrix via_f = code.help_encoder(f, g) * plan.combine_f;
  Matrix comb(fld, p.alpha, plan.total_bandwidth);
  for (std::size_t r = 0; r < p.alpha; ++r) {
    for (std::size_t col = 0; col < plan.total_bandwidth; ++col) {
      Elem acc = col < first_part ? c(r, col) : 0;
      for (std::size_t j = 0; j < fg.rows(); ++j) acc = fld.add(acc, fld.mul(c(r, first_part + j), via_f(j, col)));
      comb(r, col) = acc;
    }
  }
  plan.combine_g = std::move(comb);
  return plan;
}

TwoRepairResult run_central_repair(const CentralRepairPlan& plan, const std::vector<std::vector<Elem>>& helper_values) {
  if (helper_values.size() != plan.helpers.size()) throw UsageError("one content per planned helper expected");
  std::vector<Elem> received;
  received.reserve(plan.total_bandwidth);
  for (std::size_t i = 0; i < plan.helpers.size(); ++i) {
    if (helper_values[i].size() != plan.encoders[i].cols()) throw UsageError("node content has the wrong length");
    const auto part = plan.encoders[i].apply(helper_values[i]);
    received.insert(received.end(), part.begin(), part.end());
  }
  return TwoRepairResult{NodeContent{plan.f, plan.combine_f.apply(received)},
                         NodeContent{plan.g, plan.combine_g.apply(received)}, received.size()};
}

TwoRepairResult central_repair_two(const MsrCode& code, std::size_t f, std::size_t g,
                                   const std::vector<NodeContent>& helper_contents, TwoRepairStrategy strategy) {
  std::vector<std::size_t> helpers;
  std::vector<std::vector<Elem>> values;
  for (const auto& c : helper_contents) {
    helpers.push_back(c.node);
    values.push_back(c.values);
  }
  const CentralRepairPlan plan = plan_central_repair_two(code, f, g, helpers, strategy);
  return run_central_repair(plan, values);
}

}  // namespace atrahasis
