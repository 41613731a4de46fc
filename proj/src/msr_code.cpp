#include "atrahasis/msr_code.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "atrahasis/subsets.hpp"

namespace atrahasis {

std::string to_string(Flavor f) { return f == Flavor::Symmetric ? "symmetric" : "exterior"; }

Flavor parse_flavor(const std::string& s) {
  if (s == "symmetric" || s == "sym") return Flavor::Symmetric;
  if (s == "exterior" || s == "ext") return Flavor::Exterior;
  throw UsageError("unknown flavor '" + s + "' (expected symmetric or exterior)");
}

std::size_t CodeParams::repair_space_dim() const {
  const auto lam = flavor == Flavor::Symmetric ? binomial(static_cast<long long>(k - 1), t - 1)
                                               : binomial(static_cast<long long>(k), t - 1);
  return t * lam;
}

CodeParams derive_params(std::size_t n, std::size_t k, std::size_t d, Flavor flavor) {
  if (k < 2 || d < k || n < d + 1) {
    throw UsageError("need n-1 >= d >= k >= 2, got (n,k,d) = (" + std::to_string(n) + "," + std::to_string(k) + "," +
                     std::to_string(d) + ")");
  }
  const std::size_t r = d - k + 1;
  if (d % r != 0) {
    const std::size_t gap = shortening_gap(k, d);
    throw InfeasibleParameters("t = " + std::to_string(d) + "/" + std::to_string(r) +
                               " is not an integer; shorten an (" + std::to_string(n + gap) + "," +
                               std::to_string(k + gap) + "," + std::to_string(d + gap) + ") code by " +
                               std::to_string(gap));
  }
  CodeParams p;
  p.n = n;
  p.k = k;
  p.d = d;
  p.t = d / r;
  p.alpha = binomial(static_cast<long long>(k - 1), static_cast<long long>(p.t - 1));
  p.beta = binomial(static_cast<long long>(k - 2), static_cast<long long>(p.t) - 2);
  p.M = k * p.alpha;
  p.flavor = flavor;
  check_invariants(p);
  return p;
}

std::size_t shortening_gap(std::size_t k, std::size_t d) {
  const std::size_t r = d - k + 1;
  return (r - d % r) % r;
}

bool rank_one_minors_vanish(const CodeParams& p) {
  using ll = long long;
  const ll r = static_cast<ll>(p.d - p.k + 1);
  const std::optional<ll> rows[3][4] = {
      {r, static_cast<ll>(p.k) - 1, static_cast<ll>(p.d), static_cast<ll>(p.alpha)},
      {1, static_cast<ll>(p.t) - 1, static_cast<ll>(p.t), static_cast<ll>(p.beta)},
      {std::nullopt, std::nullopt, static_cast<ll>(p.k * p.d), static_cast<ll>(p.M)},
  };
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          if (!rows[a][i] || !rows[a][j] || !rows[b][i] || !rows[b][j]) continue;
          if (*rows[a][i] * *rows[b][j] != *rows[a][j] * *rows[b][i]) return false;
        }
  return true;
}

bool subpacketization_bound_holds(const CodeParams& p) {
  // Compare in floating point only after ruling out overflow of the exact powers.
  const auto exact_pow = [](unsigned long long b, std::size_t e) {
    unsigned long long r = 1;
    for (std::size_t i = 0; i < e; ++i) {
      if (r > (1ull << 62) / std::max(1ull, b)) return ~0ull;
      r *= b;
    }
    return r;
  };
  return p.alpha <= exact_pow(2, p.k - 1) && p.alpha <= exact_pow(p.k - 1, p.t - 1);
}

void check_invariants(const CodeParams& p) {
  const std::size_t r = p.d - p.k + 1;
  if (p.t * r != p.d || p.beta * r != p.alpha || p.M != p.k * p.alpha || p.alpha * p.t != p.beta * p.d ||
      !rank_one_minors_vanish(p) || !subpacketization_bound_holds(p)) {
    throw InternalError("MSR parameter identities fail");
  }
}

void StarFamily::validate() const {
  if (!field) throw UsageError("star family has no field");
  const auto& p = params;
  if (x_stars.size() != p.n || second_stars.size() != p.n) throw UsageError("star family must list one star pair per node");
  for (std::size_t h = 0; h < p.n; ++h) {
    if (x_stars[h].size() != p.t) throw UsageError("x star of node " + std::to_string(h) + " has the wrong length");
    if (second_stars[h].size() != p.second_dim())
      throw UsageError("second star of node " + std::to_string(h) + " has the wrong length");
    for (const auto* v : {&x_stars[h], &second_stars[h]})
      for (Elem e : *v)
        if (!field->contains(e)) throw UsageError("star coordinate outside " + field->name());
    if (p.flavor == Flavor::Exterior &&
        std::all_of(second_stars[h].begin(), second_stars[h].end(), [](Elem e) { return e == 0; }))
      throw DomainError("exterior star w of node " + std::to_string(h) + " is zero");
  }
  if (!points.empty() && points.size() != p.n) throw UsageError("point list length differs from n");
}

std::string AxiomReport::describe() const {
  if (pass) return "all axioms hold";
  std::ostringstream os;
  os << axiom << " fails at nodes {";
  for (std::size_t i = 0; i < subset.size(); ++i) os << (i ? "," : "") << subset[i];
  os << "}";
  if (failed) os << " with f = " << *failed;
  return os.str();
}

namespace {

std::size_t stacked_rank(const Field& f, std::size_t dim, const std::vector<const std::vector<Coords>*>& groups) {
  SpanBasis sb(f, dim);
  for (const auto* g : groups)
    for (const auto& row : *g) sb.insert(row);
  return sb.rank();
}

std::size_t vector_rank(const Field& f, const std::vector<std::vector<Elem>>& vs, const std::vector<std::size_t>& which) {
  SpanBasis sb(f, vs[which.front()].size());
  for (std::size_t h : which) sb.insert(vs[h]);
  return sb.rank();
}

std::vector<std::vector<Elem>> unit_x(std::size_t t) {
  std::vector<std::vector<Elem>> e(t, std::vector<Elem>(t, 0));
  for (std::size_t a = 0; a < t; ++a) e[a][a] = 1;
  return e;
}

}  // namespace

AxiomReport verify_axioms_touching(const StarFamily& stars, std::size_t count, std::size_t newest) {
  stars.validate();
  const Field& f = *stars.field;
  const CodeParams& p = stars.params;
  const int t = static_cast<int>(p.t);
  AxiomReport rep;
  const auto fail = [&](const char* axiom, const std::vector<std::size_t>& s, std::optional<std::size_t> ff = {}) {
    rep.pass = false;
    rep.axiom = axiom;
    rep.subset = s;
    rep.failed = ff;
    return false;
  };

  // Any t of the x stars span X.
  if (!for_each_subset_with(count, p.t, newest, [&](const auto& s) {
        return vector_rank(f, stars.x_stars, s) == p.t || fail("MDSxt", s);
      }))
    return rep;

  const bool sym = p.flavor == Flavor::Symmetric;
  const std::size_t span_size = sym ? p.k - p.t + 1 : p.k;
  if (!for_each_subset_with(count, span_size, newest, [&](const auto& s) {
        return vector_rank(f, stars.second_stars, s) == span_size || fail(sym ? "MDSyt" : "MDSwt", s);
      }))
    return rep;

  const std::size_t target = p.repair_space_dim();
  std::vector<std::vector<Coords>> pieces(count);
  for (std::size_t h = 0; h < count; ++h) {
    pieces[h] = sym ? sym_family(f, stars.x_stars[h], stars.second_stars[h], t - 2)
                    : ext_family(f, stars.x_stars[h], stars.second_stars[h], t - 2);
  }

  if (sym) {
    for_each_subset_with(count, p.d, newest, [&](const auto& s) {
      std::vector<const std::vector<Coords>*> groups;
      for (std::size_t h : s) groups.push_back(&pieces[h]);
      return stacked_rank(f, target, groups) == target || fail("MDSdt", s);
    });
    return rep;
  }

  // Exterior: d helpers plus X ⊗ w_f ∧ Λ^{t-2}W fill X ⊗ Λ^{t-1}W, for every f outside the helpers.
  const auto ex = unit_x(p.t);
  std::vector<std::vector<Coords>> known(count);
  for (std::size_t h = 0; h < count; ++h) {
    for (const auto& e : ex) {
      auto rows = ext_family(f, e, stars.second_stars[h], t - 2);
      known[h].insert(known[h].end(), rows.begin(), rows.end());
    }
  }
  for_each_subset_with(count, p.d + 1, newest, [&](const auto& s) {
    for (std::size_t ff : s) {
      std::vector<std::size_t> helpers;
      std::vector<const std::vector<Coords>*> groups{&known[ff]};
      for (std::size_t h : s) {
        if (h == ff) continue;
        helpers.push_back(h);
        groups.push_back(&pieces[h]);
      }
      if (stacked_rank(f, target, groups) != target) return fail("MDSqt", helpers, ff);
    }
    return true;
  });
  return rep;
}

AxiomReport verify_axioms(const StarFamily& stars) {
  stars.validate();
  for (std::size_t h = 0; h < stars.params.n; ++h) {
    auto rep = verify_axioms_touching(stars, h + 1, h);
    if (!rep.pass) return rep;
  }
  return {};
}

FileTensor encode(std::span<const Elem> raw, const CodeParams& params) {
  if (raw.size() != params.M)
    throw UsageError("encode expects " + std::to_string(params.M) + " symbols, got " + std::to_string(raw.size()));
  return FileTensor{{raw.begin(), raw.end()}};
}

// ---------------------------------------------------------------------------

MsrCode::MsrCode(StarFamily stars) : stars_(std::move(stars)) {
  stars_.validate();
  check_invariants(stars_.params);
  const Field& f = *stars_.field;
  const auto& p = stars_.params;
  node_bases_.reserve(p.n);
  for (std::size_t h = 0; h < p.n; ++h) {
    const auto rows = p.flavor == Flavor::Symmetric
                          ? expand_node_basis_sym(f, stars_.x_stars[h], stars_.second_stars[h])
                          : expand_node_basis_ext(f, stars_.x_stars[h], stars_.second_stars[h]);
    if (rows.size() != p.alpha) throw InternalError("node basis size differs from alpha");
    node_bases_.push_back(Matrix::from_rows(f, rows, p.M));
  }
}

void MsrCode::check_node(std::size_t h) const {
  if (h >= params().n) throw UsageError("node index " + std::to_string(h) + " out of range");
}

const Matrix& MsrCode::node_basis(std::size_t h) const {
  check_node(h);
  return node_bases_[h];
}

Matrix MsrCode::message_basis(std::size_t h, std::size_t f) const {
  check_node(h);
  check_node(f);
  if (h == f) throw UsageError("a node cannot help repair itself");
  const Field& fld = field();
  const auto& p = params();
  const int t = static_cast<int>(p.t);
  const std::vector<std::span<const Elem>> tail{stars_.second_stars[f]};
  std::vector<Coords> rows;
  if (p.flavor == Flavor::Symmetric) {
    rows = sym_family(fld, stars_.x_stars[h], stars_.second_stars[h], t - 2, tail);
  } else {
    rows = rank_filter(fld, ext_family(fld, stars_.x_stars[h], stars_.second_stars[h], t - 2, tail));
    if (rows.size() != p.beta)
      throw AxiomViolation("w stars of nodes " + std::to_string(h) + " and " + std::to_string(f) + " are dependent");
  }
  return Matrix::from_rows(fld, rows, p.M);
}

NodeContent MsrCode::node_content(const FileTensor& file, std::size_t h) const {
  check_node(h);
  if (file.coords.size() != params().M) throw UsageError("file tensor has the wrong length");
  return NodeContent{h, node_bases_[h].apply(file.coords)};
}

FileTensor MsrCode::download(const std::vector<NodeContent>& contents) const {
  const auto& p = params();
  std::set<std::size_t> seen;
  Matrix a(field(), 0, p.M);
  std::vector<Elem> b;
  for (const auto& c : contents) {
    check_node(c.node);
    if (!seen.insert(c.node).second) continue;
    if (c.values.size() != p.alpha) throw UsageError("node content has the wrong length");
    for (std::size_t j = 0; j < p.alpha; ++j) a.append_row(node_bases_[c.node].row(j));
    b.insert(b.end(), c.values.begin(), c.values.end());
  }
  if (seen.size() < p.k) {
    throw InsufficientNodes("download needs " + std::to_string(p.k) + " distinct nodes, got " +
                            std::to_string(seen.size()) + " (short by " + std::to_string(p.k - seen.size()) + ")");
  }
  SolveResult r;
  try {
    r = solve(a, b);
  } catch (const NoSolutionError&) {
    throw UsageError("node contents are mutually inconsistent");
  }
  if (!r.unique) {
    std::string nodes;
    for (std::size_t h : seen) nodes += (nodes.empty() ? "" : ",") + std::to_string(h);
    throw AxiomViolation("download system is singular for nodes {" + nodes + "}");
  }
  return FileTensor{std::move(r.x)};
}

Matrix MsrCode::help_encoder(std::size_t h, std::size_t f) const {
  const Matrix msg = message_basis(h, f);
  const auto& p = params();
  SpanBasis sb(field(), p.M);
  for (std::size_t j = 0; j < p.alpha; ++j) sb.insert(node_bases_[h].row(j));
  Matrix enc(field(), 0, p.alpha);
  for (std::size_t i = 0; i < msg.rows(); ++i) {
    auto c = sb.express(msg.row(i));
    if (!c) throw InternalError("help message tensor lies outside the helper's node subspace");
    enc.append_row(*c);
  }
  return enc;
}

HelpMessage MsrCode::help(const NodeContent& helper_content, std::size_t f) const {
  if (helper_content.values.size() != params().alpha) throw UsageError("node content has the wrong length");
  const Matrix enc = help_encoder(helper_content.node, f);
  return HelpMessage{helper_content.node, f, enc.apply(helper_content.values)};
}

Matrix MsrCode::repair_combiner(std::size_t f, const std::vector<std::size_t>& helpers) const {
  check_node(f);
  const auto& p = params();
  std::set<std::size_t> seen;
  SpanBasis sb(field(), p.M);
  for (std::size_t h : helpers) {
    if (h == f) throw UsageError("failed node listed as its own helper");
    if (!seen.insert(h).second) throw UsageError("helper " + std::to_string(h) + " listed twice");
    const Matrix msg = message_basis(h, f);
    for (std::size_t i = 0; i < msg.rows(); ++i) sb.insert(msg.row(i));
  }
  Matrix comb(field(), 0, sb.generators());
  for (std::size_t j = 0; j < p.alpha; ++j) {
    auto c = sb.express(node_bases_[f].row(j));
    if (!c) {
      std::string hs;
      for (std::size_t h : helpers) hs += (hs.empty() ? "" : ",") + std::to_string(h);
      const std::string what = "help messages from {" + hs + "} do not cover node " + std::to_string(f);
      if (helpers.size() < p.d) throw InsufficientNodes(what + " (" + std::to_string(helpers.size()) + " < d helpers)");
      throw AxiomViolation(what);
    }
    comb.append_row(*c);
  }
  return comb;
}

NodeContent MsrCode::repair(std::size_t f, const std::vector<HelpMessage>& messages) const {
  std::vector<std::size_t> helpers;
  std::vector<Elem> received;
  for (const auto& m : messages) {
    if (m.failed != f) throw UsageError("help message addressed to node " + std::to_string(m.failed));
    if (m.values.size() != params().beta) throw UsageError("help message has the wrong length");
    helpers.push_back(m.helper);
    received.insert(received.end(), m.values.begin(), m.values.end());
  }
  const Matrix comb = repair_combiner(f, helpers);
  return NodeContent{f, comb.apply(received)};
}

Matrix MsrCode::download_decoder(const std::vector<std::size_t>& nodes) const {
  const auto& p = params();
  if (std::set<std::size_t>(nodes.begin(), nodes.end()).size() != nodes.size())
    throw UsageError("download node list has duplicates");
  if (nodes.size() != p.k) throw InsufficientNodes("download plan needs exactly k nodes");
  Matrix a(field(), 0, p.M);
  for (std::size_t h : nodes) {
    check_node(h);
    for (std::size_t j = 0; j < p.alpha; ++j) a.append_row(node_bases_[h].row(j));
  }
  auto inv = inverse(a);
  if (!inv) throw AxiomViolation("download system is singular");
  return std::move(*inv);
}

// ---------------------------------------------------------------------------

std::vector<Elem> rs_points(const Field& f, std::size_t n, std::size_t k) {
  std::vector<Elem> pts;
  std::set<Elem> powers;
  for (Elem a : f.elements()) {
    if (pts.size() == n) break;
    if (powers.insert(f.pow(a, static_cast<long long>(k - 1))).second) pts.push_back(a);
  }
  if (pts.size() < n) {
    throw InfeasibleParameters("field too small: " + f.name() + " has only " + std::to_string(powers.size()) +
                               " distinct values of a^" + std::to_string(k - 1) + ", need " + std::to_string(n));
  }
  return pts;
}

StarFamily stars_from_points(const Field& f, const CodeParams& params, const std::vector<Elem>& points,
                             const std::vector<unsigned>& x_pattern, const std::vector<unsigned>& second_pattern) {
  if (x_pattern.size() != params.t) throw UsageError("x pattern must have t exponents");
  if (second_pattern.size() != params.second_dim()) throw UsageError("second pattern has the wrong length");
  if (points.size() != params.n) throw UsageError("need one point per node");
  StarFamily s;
  s.field = &f;
  s.params = params;
  s.points = points;
  for (Elem a : points) {
    std::vector<Elem> x, y;
    for (unsigned e : x_pattern) x.push_back(f.pow(a, e));
    for (unsigned e : second_pattern) y.push_back(f.pow(a, e));
    s.x_stars.push_back(std::move(x));
    s.second_stars.push_back(std::move(y));
  }
  s.validate();
  return s;
}

StarFamily rs_stars_t2(const Field& f, std::size_t n, std::size_t k, Flavor flavor) {
  const CodeParams p = derive_params(n, k, 2 * (k - 1), flavor);
  const auto pts = rs_points(f, n, k);
  std::vector<unsigned> second(p.second_dim());
  for (unsigned i = 0; i < second.size(); ++i) second[i] = i;
  return stars_from_points(f, p, pts, {0, static_cast<unsigned>(k - 1)}, second);
}

}  // namespace atrahasis
