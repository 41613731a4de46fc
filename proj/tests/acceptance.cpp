// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance <atrahasis cli binary> <fixtures dir>
//
// All arithmetic is exact, so every comparison below is equality with zero
// tolerance. Pinned budgets: witness redraws <= 10, bandwidth counts exact.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "atrahasis/cluster.hpp"
#include "atrahasis/code_spec.hpp"
#include "atrahasis/errors.hpp"
#include "atrahasis/msr_code.hpp"
#include "atrahasis/pm_oracle.hpp"
#include "atrahasis/star_search.hpp"
#include "atrahasis/subsets.hpp"
#include "atrahasis/transforms.hpp"
#include "json.hpp"

using namespace atrahasis;
namespace fs = std::filesystem;

namespace {

constexpr int kFiles = 20;
constexpr std::size_t kMaxRedraws = 10;
constexpr std::size_t kSweepCap = 30;

fs::path g_cli;
fs::path g_fixtures;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Records the first failure and keeps going so the detail names it.
struct Check {
  Outcome out;
  void expect(bool ok, const std::string& what) {
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
};

std::vector<Elem> random_symbols(const Field& f, std::size_t n, std::mt19937& rng) {
  std::vector<Elem> v(n);
  for (auto& e : v) e = rng() % f.order();
  return v;
}

std::string tuple_str(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

std::shared_ptr<const MsrCode> fixture_code() {
  static const auto code = [] {
    const CodeSpec spec = load_code_spec(g_fixtures / "atrahasis-956.spec");
    return std::make_shared<const MsrCode>(spec.stars);
  }();
  return code;
}

// 1 -------------------------------------------------------------------------
Outcome fixture_reproduction() {
  Check c;
  const CodeSpec spec = load_code_spec(g_fixtures / "atrahasis-956.spec");
  c.expect(spec.hash_ok, "content hash mismatch");
  const Field& f = *spec.stars.field;
  c.expect(f.is_binary() && f.spec().m == 4 && f.spec().reduction_poly == 0x13, "field is not GF(2)[z]/(z^4+z+1)");
  const auto& p = spec.stars.params;
  c.expect(p.n == 9 && p.k == 5 && p.d == 6 && p.t == 3 && p.alpha == 6 && p.flavor == Flavor::Symmetric,
           "params are not (9,5,6,6) symmetric");

  // Points 0, z^3, z^6, z^-3, z^-6, z^-1, z^-2, z^-4, z^-8 with z = 0x2.
  std::vector<Elem> points{0};
  for (long long e : {3, 6, -3, -6, -1, -2, -4, -8}) points.push_back(f.pow(0x2, e));
  c.expect(spec.stars.points == points, "evaluation points differ");
  for (std::size_t h = 0; h < 9 && h < spec.stars.x_stars.size(); ++h) {
    const Elem a = points[h];
    c.expect(spec.stars.x_stars[h] == std::vector<Elem>{1, f.pow(a, 2), f.pow(a, 6)}, "x star " + std::to_string(h));
    c.expect(spec.stars.second_stars[h] == std::vector<Elem>{1, a, f.pow(a, 3)}, "y star " + std::to_string(h));
  }

  // Independent rank check of the 3-subset axioms, then the full verifier.
  std::size_t triples = 0;
  for_each_subset(9, 3, [&](const std::vector<std::size_t>& s) {
    std::vector<std::vector<Elem>> xs, ys;
    for (std::size_t h : s) {
      xs.push_back(spec.stars.x_stars[h]);
      ys.push_back(spec.stars.second_stars[h]);
    }
    c.expect(rank(Matrix::from_rows(f, xs)) == 3, "MDSxt fails at " + tuple_str(s));
    c.expect(rank(Matrix::from_rows(f, ys)) == 3, "MDSyt fails at " + tuple_str(s));
    ++triples;
    return true;
  });
  const AxiomReport r = verify_axioms(spec.stars);
  c.expect(r.pass, r.describe());
  if (c.out.pass)
    c.out.detail = std::to_string(triples) + " MDSxt + " + std::to_string(triples) + " MDSyt + " +
                   std::to_string(binomial(9, 6)) + " MDSdt subsets hold";
  return c.out;
}

// 2 -------------------------------------------------------------------------
Outcome exhaustive_download() {
  Check c;
  const MsrCode& code = *fixture_code();
  std::mt19937 rng(2002);
  std::size_t downloads = 0;
  std::vector<FileTensor> files;
  for (int i = 0; i < kFiles; ++i) files.push_back(FileTensor{random_symbols(code.field(), 30, rng)});
  for_each_subset(9, 5, [&](const std::vector<std::size_t>& s) {
    const Matrix dec = code.download_decoder(s);
    for (const auto& file : files) {
      std::vector<NodeContent> contents;
      std::vector<Elem> stacked;
      for (std::size_t h : s) {
        contents.push_back(code.node_content(file, h));
        stacked.insert(stacked.end(), contents.back().values.begin(), contents.back().values.end());
      }
      c.expect(code.download(contents).coords == file.coords, "download from " + tuple_str(s));
      c.expect(dec.apply(stacked) == file.coords, "decoder plan from " + tuple_str(s));
      ++downloads;
    }
    return true;
  });
  c.expect(downloads == 126u * kFiles, "subset count");
  if (c.out.pass) c.out.detail = "126 subsets x 20 files exact";
  return c.out;
}

// 3 -------------------------------------------------------------------------
Outcome exhaustive_repair() {
  Check c;
  const MsrCode& code = *fixture_code();
  std::mt19937 rng(3003);
  std::vector<FileTensor> files;
  for (int i = 0; i < kFiles; ++i) files.push_back(FileTensor{random_symbols(code.field(), 30, rng)});
  std::size_t repairs = 0;
  for (std::size_t f = 0; f < 9; ++f) {
    std::vector<std::size_t> others;
    for (std::size_t h = 0; h < 9; ++h)
      if (h != f) others.push_back(h);
    for_each_subset(8, 6, [&](const std::vector<std::size_t>& idx) {
      for (const auto& file : files) {
        std::vector<HelpMessage> msgs;
        for (std::size_t i : idx) {
          msgs.push_back(code.help(code.node_content(file, others[i]), f));
          c.expect(msgs.back().values.size() == 3, "message size is not beta = 3");
        }
        c.expect(code.repair(f, msgs).values == code.node_content(file, f).values,
                 "repair of node " + std::to_string(f));
      }
      ++repairs;
      return true;
    });
  }
  c.expect(repairs == 9u * 28u, "helper-set count");
  if (c.out.pass) c.out.detail = "9 failures x 28 helper sets x 20 files, 3 symbols per helper";
  return c.out;
}

// 4 -------------------------------------------------------------------------
Outcome msr_identities() {
  Check c;
  std::size_t count = 0;
  for (std::size_t k = 2; k <= 14; ++k) {
    for (std::size_t d = k; d <= 3 * k; ++d) {
      if (d % (d - k + 1) != 0) continue;
      for (Flavor fl : {Flavor::Symmetric, Flavor::Exterior}) {
        const CodeParams p = derive_params(d + 1, k, d, fl);
        const std::string tag = "(k,d)=(" + std::to_string(k) + "," + std::to_string(d) + ")";
        // Values recomputed here from t = d/(d-k+1), α = C(k-1, t-1), β = C(k-2, t-2).
        const std::size_t t = d / (d - k + 1);
        const std::size_t alpha = binomial(k - 1, t - 1), beta = t >= 2 ? binomial(k - 2, t - 2) : 0;
        c.expect(p.t == t && p.alpha == alpha && p.beta == beta, "derived parameters differ at " + tag);
        // Rows (d-k+1, k-1, d, α), (1, t-1, t, β), (*, *, kd, M): every 2x2 minor over known entries.
        const long long r1[4] = {static_cast<long long>(d - k + 1), static_cast<long long>(k - 1),
                                 static_cast<long long>(d), static_cast<long long>(alpha)};
        const long long r2[4] = {1, static_cast<long long>(t - 1), static_cast<long long>(t),
                                 static_cast<long long>(beta)};
        const long long r3[2] = {static_cast<long long>(k * d), static_cast<long long>(k * alpha)};
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j) c.expect(r1[i] * r2[j] == r1[j] * r2[i], "rows 1-2 minor at " + tag);
        c.expect(r1[2] * r3[1] == r1[3] * r3[0] && r2[2] * r3[1] == r2[3] * r3[0], "row 3 minor at " + tag);
        std::size_t pow2 = 1, powk = 1;
        for (std::size_t i = 0; i + 1 < k; ++i) pow2 *= 2;
        for (std::size_t i = 0; i + 1 < t; ++i) powk *= k - 1;
        c.expect(alpha <= std::min(pow2, powk), "alpha bound fails at " + tag);
        c.expect(p.beta * (d - k + 1) == p.alpha, "beta(d-k+1) != alpha at " + tag);
        c.expect(p.M == k * p.alpha, "M != k alpha at " + tag);
        c.expect(p.t * p.alpha == d * p.beta, "t alpha != d beta at " + tag);
        c.expect(rank_one_minors_vanish(p), "a 2x2 minor is nonzero at " + tag);
        c.expect(subpacketization_bound_holds(p), "alpha bound fails at " + tag);
        ++count;
      }
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(count) + " parameter sets";
  return c.out;
}

// 5 -------------------------------------------------------------------------
Outcome t2_oracle_equivalence() {
  Check c;
  const Field& f = Field::binary(4);
  const std::size_t n = 6, k = 3, d = 4;
  const MsrCode code(rs_stars_t2(f, n, k, Flavor::Symmetric));
  const auto& st = code.stars();
  std::vector<Elem> xis;
  std::vector<std::vector<Elem>> ys, ws;
  for (std::size_t h = 0; h < n; ++h) {
    xis.push_back(st.x_stars[h][1]);
    ys.push_back(st.second_stars[h]);
    std::vector<Elem> w;
    for (std::size_t i = 0; i < k; ++i) w.push_back(f.pow(st.points[h], static_cast<long long>(i)));
    ws.push_back(w);
  }
  std::mt19937 rng(5005);
  for (int it = 0; it < kFiles; ++it) {
    const auto raw = random_symbols(f, k * (k - 1), rng);
    const auto sfile = pm::pack_symmetric(f, k, raw);
    const FileTensor phi = pm::to_tensor(sfile);
    std::vector<std::vector<Elem>> node(n);
    for (std::size_t h = 0; h < n; ++h) {
      node[h] = code.node_content(phi, h).values;
      c.expect(node[h] == pm::pm_node(sfile, xis[h], ys[h]), "node value " + std::to_string(h));
    }
    for_each_subset(n, k, [&](const std::vector<std::size_t>& s) {
      std::vector<NodeContent> contents;
      std::vector<std::vector<Elem>> nv, sy;
      std::vector<Elem> sx;
      for (std::size_t h : s) {
        contents.push_back(NodeContent{h, node[h]});
        nv.push_back(node[h]);
        sx.push_back(xis[h]);
        sy.push_back(ys[h]);
      }
      const auto back = pm::pm_download(f, nv, sx, sy);
      c.expect(code.download(contents).coords == phi.coords, "tensor download " + tuple_str(s));
      c.expect(pm::to_tensor(back).coords == phi.coords, "oracle download " + tuple_str(s));
      return true;
    });
    for (std::size_t fl = 0; fl < n; ++fl) {
      std::vector<std::size_t> others;
      for (std::size_t h = 0; h < n; ++h)
        if (h != fl) others.push_back(h);
      for_each_subset(others.size(), d, [&](const std::vector<std::size_t>& idx) {
        std::vector<HelpMessage> msgs;
        std::vector<Elem> scalars, hx;
        std::vector<std::vector<Elem>> hy;
        for (std::size_t i : idx) {
          const std::size_t h = others[i];
          msgs.push_back(code.help(NodeContent{h, node[h]}, fl));
          scalars.push_back(pm::pm_help(sfile, xis[h], ys[h], ys[fl]));
          c.expect(msgs.back().values == std::vector<Elem>{scalars.back()}, "help scalar");
          hx.push_back(xis[h]);
          hy.push_back(ys[h]);
        }
        const auto via_tensor = code.repair(fl, msgs).values;
        const auto via_oracle = pm::pm_repair(f, scalars, hx, hy, xis[fl], ys[fl]);
        c.expect(via_tensor == node[fl] && via_oracle == node[fl], "repair of node " + std::to_string(fl));
        return true;
      });
    }

    // Skew oracle on its own: compressed storage, every download and repair.
    const auto afile = pm::pack_skew(f, k, raw);
    std::vector<std::vector<Elem>> full(n), stored(n);
    for (std::size_t h = 0; h < n; ++h) {
      full[h] = pm::skew_node(afile, xis[h], ws[h]);
      stored[h] = pm::skew_compress(full[h], ws[h]);
    }
    for_each_subset(n, k, [&](const std::vector<std::size_t>& s) {
      std::vector<std::vector<Elem>> nv, sw;
      std::vector<Elem> sx;
      for (std::size_t h : s) {
        nv.push_back(stored[h]);
        sx.push_back(xis[h]);
        sw.push_back(ws[h]);
      }
      const auto back = pm::skew_download(f, nv, sx, sw);
      c.expect(back.A1 == afile.A1 && back.A2 == afile.A2, "skew download " + tuple_str(s));
      return true;
    });
    for (std::size_t fl = 0; fl < n; ++fl) {
      std::vector<std::size_t> others;
      for (std::size_t h = 0; h < n; ++h)
        if (h != fl) others.push_back(h);
      for_each_subset(others.size(), d, [&](const std::vector<std::size_t>& idx) {
        std::vector<Elem> scalars, hx;
        std::vector<std::vector<Elem>> hw;
        for (std::size_t i : idx) {
          const std::size_t h = others[i];
          scalars.push_back(pm::skew_help(f, pm::skew_expand(f, stored[h], ws[h]), ws[fl]));
          hx.push_back(xis[h]);
          hw.push_back(ws[h]);
        }
        c.expect(pm::skew_repair(f, scalars, hx, hw, xis[fl], ws[fl]) == full[fl],
                 "skew repair of node " + std::to_string(fl));
        return true;
      });
    }
  }
  if (c.out.pass) c.out.detail = "20 files: 20 downloads and 30 repairs each, both oracles";
  return c.out;
}

// 6 -------------------------------------------------------------------------
Outcome shortening() {
  Check c;
  const ShortenedCode code = shorten(fixture_code(), 1);
  const auto& p = code.params();
  c.expect(p.n == 8 && p.k == 4 && p.d == 5 && p.alpha == 6 && p.beta == 3 && p.M == 24, "params are not (8,4,5,6)");
  std::mt19937 rng(6006);
  for (int it = 0; it < kFiles; ++it) {
    const auto user = random_symbols(code.field(), p.M, rng);
    const FileTensor file = code.encode(user);
    std::vector<NodeContent> contents;
    for (std::size_t i = 0; i < p.n; ++i) contents.push_back(code.node_content(file, i));
    for_each_subset(p.n, p.k, [&](const std::vector<std::size_t>& s) {
      std::vector<NodeContent> pick;
      for (std::size_t i : s) pick.push_back(contents[i]);
      c.expect(code.download(pick) == user, "download from " + tuple_str(s));
      return true;
    });
    for (std::size_t f = 0; f < p.n; ++f) {
      std::vector<std::size_t> others;
      for (std::size_t h = 0; h < p.n; ++h)
        if (h != f) others.push_back(h);
      for_each_subset(others.size(), p.d, [&](const std::vector<std::size_t>& idx) {
        std::vector<HelpMessage> msgs;
        for (std::size_t i : idx) {
          msgs.push_back(code.help(contents[others[i]], f));
          c.expect(msgs.back().values.size() == 3, "message size is not beta = 3");
        }
        c.expect(code.repair(f, msgs).values == contents[f].values, "repair of node " + std::to_string(f));
        return true;
      });
    }
  }

  const ShortenedCode twice = code.shorten(1);
  const ShortenedCode depth2 = shorten(fixture_code(), 2);
  c.expect(twice.params() == depth2.params(), "double and depth-2 params differ");
  c.expect(twice.pinned() == depth2.pinned(), "double and depth-2 pins differ");
  for (int it = 0; it < kFiles; ++it) {
    const auto user = random_symbols(code.field(), depth2.params().M, rng);
    const FileTensor a = twice.encode(user), b = depth2.encode(user);
    c.expect(a.coords == b.coords, "encodings differ");
    for (std::size_t i = 0; i < depth2.params().n; ++i)
      c.expect(twice.node_content(a, i).values == depth2.node_content(b, i).values, "node contents differ");
    std::vector<NodeContent> pick{twice.node_content(a, 0), twice.node_content(a, 3), twice.node_content(a, 6)};
    c.expect(twice.download(pick) == user && depth2.download(pick) == user, "depth-2 download");
  }
  if (c.out.pass) c.out.detail = "(8,4,5,6): 70 downloads and 168 repairs x 20 files; double == depth-2";
  return c.out;
}

// 7 -------------------------------------------------------------------------
Outcome two_failure_bandwidth() {
  Check c;
  const MsrCode& code = *fixture_code();
  const std::size_t k = 5, d = 6;
  const std::pair<TwoRepairStrategy, std::size_t> expect[] = {
      {TwoRepairStrategy::Naive, 30}, {TwoRepairStrategy::Cascade, 28}, {TwoRepairStrategy::Subspace, 27}};
  c.expect(naive_two_bandwidth(k, d) == 30 && cascade_two_bandwidth(k, d) == 28 && subspace_two_bandwidth(k) == 27,
           "closed forms at k = 5");
  std::mt19937 rng(7007);
  std::vector<FileTensor> files;
  for (int i = 0; i < kFiles; ++i) files.push_back(FileTensor{random_symbols(code.field(), 30, rng)});
  std::size_t pairs = 0;
  for_each_subset(9, 2, [&](const std::vector<std::size_t>& fg) {
    std::vector<std::size_t> helpers;
    for (std::size_t h = 0; h < 9 && helpers.size() < d; ++h)
      if (h != fg[0] && h != fg[1]) helpers.push_back(h);
    for (const auto& [strategy, bw] : expect) {
      const CentralRepairPlan plan = plan_central_repair_two(code, fg[0], fg[1], helpers, strategy);
      c.expect(plan.total_bandwidth == bw, to_string(strategy) + " bandwidth at " + tuple_str(fg));
      for (const auto& file : files) {
        std::vector<std::vector<Elem>> values;
        for (std::size_t h : helpers) values.push_back(code.node_content(file, h).values);
        const TwoRepairResult r = run_central_repair(plan, values);
        c.expect(r.f.values == code.node_content(file, fg[0]).values &&
                     r.g.values == code.node_content(file, fg[1]).values,
                 to_string(strategy) + " contents at " + tuple_str(fg));
      }
    }
    ++pairs;
    return true;
  });
  c.expect(pairs == 36, "pair count");

  // Ledger per stripe through the cluster, one pair per strategy.
  const fs::path root = fs::temp_directory_path() / ("atrahasis_acc7_" + std::to_string(::getpid()));
  fs::remove_all(root);
  Cluster::init(root, dump_code_spec(code.stars()));
  {
    Cluster cl(root);
    std::vector<std::uint8_t> data(4000);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    cl.put(data);
    std::size_t f = 0;
    for (const auto& [strategy, bw] : expect) {
      const std::size_t g = f + 4;
      cl.fail(f);
      cl.fail(g);
      const RepairReport r = cl.repair2(f, g, strategy);
      c.expect(r.symbols == r.stripes * bw, to_string(strategy) + " ledger per stripe");
      f += 1;
    }
    c.expect(cl.get() == data, "cluster get after repair2");
  }
  fs::remove_all(root);
  if (c.out.pass) c.out.detail = "36 pairs x 20 files; 30 / 28 / 27 symbols per stripe";
  return c.out;
}

// 8 -------------------------------------------------------------------------
Outcome nullstellensatz_sweep() {
  Check c;
  const Field& f = Field::prime(127);
  const auto reports = sweep_small_cases(kSweepCap, f, 20240101, kMaxRedraws);
  std::size_t worst = 0;
  for (const auto& r : reports) {
    const std::string tag = "(k,d,t)=(" + std::to_string(r.k) + "," + std::to_string(r.d) + "," + std::to_string(r.t) + ")";
    c.expect(r.alpha <= kSweepCap, "case above the cap " + tag);
    c.expect(r.verdict == Verdict::NonzeroWitnessed, "inconclusive at " + tag);
    c.expect(r.redraws <= kMaxRedraws, "redraw budget exceeded at " + tag);
    c.expect(r.verdict != Verdict::NonzeroWitnessed || replay_witness(r, f), "replay fails at " + tag);
    worst = std::max(worst, r.redraws);
  }
  // (5,6,3) must be among the cases.
  const bool has_956 = std::any_of(reports.begin(), reports.end(),
                                   [](const WitnessReport& r) { return r.k == 5 && r.d == 6 && r.t == 3; });
  c.expect(has_956, "(5,6,3) missing from the sweep");
  if (c.out.pass)
    c.out.detail = std::to_string(reports.size()) + " cases with alpha <= 30 witnessed over GF(127), max redraws " +
                   std::to_string(worst);
  return c.out;
}

// 9 -------------------------------------------------------------------------
Outcome table_rows() {
  Check c;
  {
    const MsrCode& code = *fixture_code();
    const auto& p = code.params();
    c.expect(p.t == 3 && code.field().order() == 16 && p.n == 9 && p.k == 5 && p.d == 6 && p.alpha == 6 &&
                 p.beta == 3 && p.M == 30,
             "row (3, 16, 9, 5, 6, 6, 3, 30)");
    c.expect(verify_axioms(code.stars()).pass, "fixture row does not verify");
  }
  // t = 2 rows: (2, O(n), n, k, 2(k-1), k-1, 1, k(k-1)). In characteristic 2,
  // a -> a^{k-1} is a bijection when gcd(k-1, 2^m - 1) = 1.
  struct Row {
    std::size_t k;
    unsigned m;
  };
  std::mt19937 rng(9009);
  std::size_t rows = 1;
  for (const Row row : {Row{3, 4}, Row{4, 5}, Row{5, 4}, Row{6, 5}}) {
    const std::size_t k = row.k, n = 2 * k;
    const Field& f = Field::binary(row.m);
    for (Flavor fl : {Flavor::Symmetric, Flavor::Exterior}) {
      const MsrCode code(rs_stars_t2(f, n, k, fl));
      const auto& p = code.params();
      const std::string tag = "t = 2 row k = " + std::to_string(k) + " " + to_string(fl);
      c.expect(p.t == 2 && p.d == 2 * (k - 1) && p.alpha == k - 1 && p.beta == 1 && p.M == k * (k - 1), tag);
      c.expect(verify_axioms(code.stars()).pass, tag + " does not verify");
      const FileTensor file{random_symbols(f, p.M, rng)};
      std::vector<NodeContent> pick;
      for (std::size_t h = n - k; h < n; ++h) pick.push_back(code.node_content(file, h));
      c.expect(code.download(pick).coords == file.coords, tag + " download");
      std::vector<HelpMessage> msgs;
      for (std::size_t h = 1; h <= p.d; ++h) msgs.push_back(code.help(code.node_content(file, h), 0));
      c.expect(code.repair(0, msgs).values == code.node_content(file, 0).values, tag + " repair");
      ++rows;
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(rows) + " rows: (9,5,6,6) over GF(16) and t = 2 for k = 3..6";
  return c.out;
}

// 10 ------------------------------------------------------------------------
int run(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome cli_end_to_end() {
  Check c;
  const fs::path dir = fs::temp_directory_path() / ("atrahasis_acc10_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = g_cli.string();
  const std::string store = (dir / "store").string();
  const fs::path in = dir / "in.bin", out = dir / "out.bin";

  std::mt19937 rng(1010);
  std::vector<std::uint8_t> data(1 << 20);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  write_file_atomic(in, data);

  c.expect(run(cli + " --store " + store + " put " + in.string() + " --spec " +
               (g_fixtures / "atrahasis-956.spec").string()) == 0,
           "put failed");
  std::vector<std::size_t> nodes{0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(4);
  for (std::size_t h : nodes) {
    c.expect(run(cli + " --store " + store + " fail " + std::to_string(h)) == 0, "fail " + std::to_string(h));
    c.expect(run(cli + " --store " + store + " repair " + std::to_string(h)) == 0, "repair " + std::to_string(h));
  }
  c.expect(run(cli + " --store " + store + " get " + out.string()) == 0, "get failed");
  c.expect(fs::exists(out) && read_file(out) == data, "retrieved file differs");
  c.expect(run(cli + " --store " + store + " get " + out.string() + " --nodes 8,7,6,5,4") == 0, "second get failed");
  c.expect(fs::exists(out) && read_file(out) == data, "retrieved file differs (nodes 8..4)");

  const auto manifest_bytes = read_file(fs::path(store) / "manifest.json");
  const auto manifest = nlohmann::json::parse(manifest_bytes.begin(), manifest_bytes.end());
  const std::uint64_t stripes = manifest["object"]["stripes"];
  const std::uint64_t ledger = manifest["ledger"]["repair_symbols"];
  c.expect(ledger == stripes * 4 * 6 * 3, "ledger " + std::to_string(ledger) + " != chunks*4*d*beta = " +
                                              std::to_string(stripes * 4 * 6 * 3));
  fs::remove_all(dir);
  if (c.out.pass)
    c.out.detail = "1 MiB, failed+repaired nodes " + tuple_str(nodes) + ", ledger " + std::to_string(ledger) + " = " +
                   std::to_string(stripes) + " chunks x 4 x 6 x 3";
  return c.out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <atrahasis binary> <fixtures dir>\n";
    return 2;
  }
  g_cli = fs::absolute(argv[1]);
  g_fixtures = fs::absolute(argv[2]);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fixture reproduction", fixture_reproduction},
      {"exhaustive download", exhaustive_download},
      {"exhaustive single repair", exhaustive_repair},
      {"MSR identities", msr_identities},
      {"t=2 oracle equivalence", t2_oracle_equivalence},
      {"shortening", shortening},
      {"two-failure bandwidth", two_failure_bandwidth},
      {"nullstellensatz sweep", nullstellensatz_sweep},
      {"table spot-checks", table_rows},
      {"CLI end-to-end", cli_end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " - " << o.detail
         << " (" << secs << " s)";
    std::cout << line.str() << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
