#include "atrahasis/star_search.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <tuple>

namespace atrahasis {

StarFamily fixture_atrahasis_956() {
  const Field& f = Field::get(FieldSpec::binary(4, 0x13));
  const Elem z = 0b10;
  std::vector<Elem> pts{0};
  for (int e : {3, 6, -3, -6, -1, -2, -4, -8}) pts.push_back(f.pow(z, e));
  return stars_from_points(f, derive_params(9, 5, 6, Flavor::Symmetric), pts, {0, 2, 6}, {0, 1, 3});
}

std::vector<unsigned> default_x_pattern(std::size_t k, std::size_t t) {
  std::vector<unsigned> p(t);
  for (std::size_t j = 0; j < t; ++j) p[j] = static_cast<unsigned>(j * (k - t + 1));
  return p;
}

std::vector<unsigned> default_second_pattern(std::size_t k, std::size_t t, Flavor flavor) {
  std::vector<unsigned> p(flavor == Flavor::Symmetric ? k - t + 1 : k);
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = static_cast<unsigned>(j);
  return p;
}

PoolResult grow_pool(const SearchConfig& cfg) {
  if (!cfg.field) throw UsageError("search needs a field");
  // n only matters for the final family; d+1 satisfies derive_params' precondition.
  CodeParams p = derive_params(cfg.d + 1, cfg.k, cfg.d, cfg.flavor);
  const auto xp = cfg.x_pattern.empty() ? default_x_pattern(p.k, p.t) : cfg.x_pattern;
  const auto sp = cfg.second_pattern.empty() ? default_second_pattern(p.k, p.t, p.flavor) : cfg.second_pattern;
  if (xp.size() != p.t) throw UsageError("x pattern needs " + std::to_string(p.t) + " exponents");
  if (sp.size() != p.second_dim()) throw UsageError("second pattern needs " + std::to_string(p.second_dim()) + " exponents");
  const std::size_t cap = cfg.max_pool.value_or(cfg.field->order());

  const Field& f = *cfg.field;
  StarFamily pool;
  pool.field = &f;
  pool.params = p;
  pool.params.n = 0;
  for (Elem a : f.elements()) {
    if (pool.points.size() >= cap) break;
    std::vector<Elem> x, y;
    for (unsigned e : xp) x.push_back(f.pow(a, e));
    for (unsigned e : sp) y.push_back(f.pow(a, e));
    if (p.flavor == Flavor::Exterior && std::all_of(y.begin(), y.end(), [](Elem v) { return v == 0; })) continue;
    pool.x_stars.push_back(std::move(x));
    pool.second_stars.push_back(std::move(y));
    pool.points.push_back(a);
    pool.params.n = pool.points.size();
    if (!verify_axioms_touching(pool, pool.params.n, pool.params.n - 1).pass) {
      pool.x_stars.pop_back();
      pool.second_stars.pop_back();
      pool.points.pop_back();
      pool.params.n = pool.points.size();
    }
  }
  PoolResult res;
  res.points = pool.points;
  if (pool.points.size() < p.d + 1) {
    res.diagnostic = "search failed: pool of " + std::to_string(pool.points.size()) + " points over " + f.name() +
                     ", a code needs at least d+1 = " + std::to_string(p.d + 1);
    return res;
  }
  res.found = true;
  res.family = std::move(pool);
  res.diagnostic = "pool of " + std::to_string(res.points.size()) + " points";
  return res;
}

std::string to_string(Verdict v) { return v == Verdict::NonzeroWitnessed ? "nonzero-witnessed" : "inconclusive"; }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t case_seed(std::uint64_t seed, std::size_t k, std::size_t d, std::size_t t) {
  std::uint64_t s = splitmix64(seed);
  for (std::size_t v : {k, d, t}) s = splitmix64(s ^ v);
  return s;
}

Matrix witness_matrix(const Field& f, const WitnessReport& r) {
  const int t = static_cast<int>(r.t);
  std::vector<Coords> rows;
  for (std::size_t i = 0; i < r.d; ++i) {
    auto block = r.flavor == Flavor::Symmetric ? sym_family(f, r.x_point[i], r.second_point[i], t - 2)
                                               : ext_family(f, r.x_point[i], r.second_point[i], t - 2);
    rows.insert(rows.end(), block.begin(), block.end());
  }
  std::size_t width;
  if (r.flavor == Flavor::Symmetric) {
    width = r.t * binomial(static_cast<long long>(r.k - 1), t - 1);
  } else {
    width = r.t * binomial(static_cast<long long>(r.k), t - 1);
    const auto& wf = r.second_point.back();
    for (std::size_t a = 0; a < r.t; ++a) {
      std::vector<Elem> e(r.t, 0);
      e[a] = 1;
      auto block = ext_family(f, e, wf, t - 2);
      rows.insert(rows.end(), block.begin(), block.end());
    }
  }
  return Matrix::from_rows(f, rows, width);
}

bool evaluate(const Field& f, WitnessReport& r) {
  const Matrix m = witness_matrix(f, r);
  r.matrix_rows = m.rows();
  r.matrix_cols = m.cols();
  if (r.flavor == Flavor::Symmetric) {
    r.determinant = determinant(m);
    r.rank = r.determinant != 0 ? m.rows() : rank(m);
    return r.determinant != 0;
  }
  r.rank = rank(m);
  return r.rank == m.cols();
}

}  // namespace

WitnessReport nullstellensatz_witness(std::size_t k, std::size_t d, Flavor flavor, const Field& witness_field,
                                      std::uint64_t seed, std::size_t max_redraws) {
  if (witness_field.is_binary()) throw UsageError("the witness field must be a prime field");
  const CodeParams p = derive_params(d + 1, k, d, flavor);
  WitnessReport r;
  r.k = k;
  r.d = d;
  r.t = p.t;
  r.alpha = p.alpha;
  r.flavor = flavor;
  r.field_order = witness_field.order();
  r.seed = seed;
  std::mt19937_64 rng(case_seed(seed, k, d, p.t));
  std::uniform_int_distribution<Elem> pick(0, witness_field.order() - 1);
  const auto draw = [&](std::size_t len) {
    std::vector<Elem> v(len);
    for (auto& e : v) e = pick(rng);
    return v;
  };
  const std::size_t vectors = flavor == Flavor::Symmetric ? d : d + 1;
  for (std::size_t attempt = 0; attempt <= max_redraws; ++attempt) {
    r.x_point.clear();
    r.second_point.clear();
    for (std::size_t i = 0; i < vectors; ++i) {
      r.x_point.push_back(draw(p.t));
      r.second_point.push_back(draw(p.second_dim()));
    }
    ++r.draws;
    if (evaluate(witness_field, r)) {
      r.verdict = Verdict::NonzeroWitnessed;
      r.redraws = r.draws - 1;
      return r;
    }
  }
  r.verdict = Verdict::Inconclusive;
  r.redraws = r.draws;
  return r;
}

bool replay_witness(const WitnessReport& report, const Field& witness_field) {
  WitnessReport copy = report;
  return evaluate(witness_field, copy);
}

std::vector<SweepCase> sweep_cases(std::size_t alpha_cap, std::size_t max_k) {
  std::vector<SweepCase> out;
  // k = r(t-1)+1, d = rt with r = d-k+1 >= 1.
  for (std::size_t t = 2; t <= max_k; ++t) {
    for (std::size_t r = 1;; ++r) {
      const std::size_t k = r * (t - 1) + 1;
      if (k > max_k) break;
      const std::size_t alpha = binomial(static_cast<long long>(k - 1), static_cast<long long>(t - 1));
      if (alpha > alpha_cap) break;  // α grows with r for fixed t
      out.push_back({k, r * t, t, alpha});
    }
  }
  std::sort(out.begin(), out.end(), [](const SweepCase& a, const SweepCase& b) {
    return std::tie(a.alpha, a.k, a.d) < std::tie(b.alpha, b.k, b.d);
  });
  return out;
}

std::vector<WitnessReport> sweep_small_cases(std::size_t alpha_cap, const Field& witness_field, std::uint64_t seed,
                                             std::size_t max_redraws, std::optional<std::size_t> max_k, Flavor flavor) {
  std::vector<WitnessReport> out;
  for (const auto& c : sweep_cases(alpha_cap, max_k.value_or(alpha_cap + 1)))
    out.push_back(nullstellensatz_witness(c.k, c.d, flavor, witness_field, seed, max_redraws));
  return out;
}

void write_sweep_tsv(std::ostream& os, const std::vector<WitnessReport>& reports) {
  os << "k\td\tt\talpha\tfield\tredraws\tverdict\n";
  for (const auto& r : reports) {
    os << r.k << '\t' << r.d << '\t' << r.t << '\t' << r.alpha << "\tGF(" << r.field_order << ")\t" << r.redraws << '\t'
       << to_string(r.verdict) << '\n';
  }
}

}  // namespace atrahasis
