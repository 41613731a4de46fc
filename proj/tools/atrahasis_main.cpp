// atrahasis: command-line front end for the MSR code library and the
// single-process storage cluster simulator.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "atrahasis/cluster.hpp"
#include "atrahasis/code_spec.hpp"
#include "atrahasis/errors.hpp"
#include "atrahasis/star_search.hpp"
#include "atrahasis/transforms.hpp"
#include "json.hpp"

using namespace atrahasis;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kInfeasible = 3, kAxiom = 4, kInsufficient = 5 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage:
    case ErrorKind::Domain: return kUsage;
    case ErrorKind::InfeasibleParameters: return kInfeasible;
    case ErrorKind::AxiomViolation:
    case ErrorKind::NoSolution: return kAxiom;
    case ErrorKind::InsufficientNodes: return kInsufficient;
    case ErrorKind::Io:
    case ErrorKind::Internal: return kFailure;
  }
  return kFailure;
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InfeasibleParameters: return "infeasible-parameters";
    case ErrorKind::AxiomViolation: return "axiom-violation";
    case ErrorKind::InsufficientNodes: return "insufficient-nodes";
    case ErrorKind::NoSolution: return "no-solution";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

struct Options {
  bool json = false;
  std::string store = "store";
  std::string spec;
  std::string field;
  std::uint64_t seed = 1;
  std::string out;

  // gen
  std::size_t n = 0, k = 0, d = 0;
  std::string flavor = "symmetric";
  std::string source = "rs";
  std::string fixture;
  std::string shorten_from;
  std::vector<unsigned> x_pattern, y_pattern;

  // cluster
  std::string file;
  std::string nodes = "auto";
  std::string helpers = "auto";
  std::size_t node = 0, node2 = 0;
  std::string strategy = "subspace";

  // sweep / shorten
  std::size_t alpha_cap = 10;
  std::size_t max_redraws = 10;
  std::size_t max_k = 0;
  std::size_t delta = 1;
};

std::vector<std::size_t> parse_index_list(const std::string& s) {
  std::vector<std::size_t> v;
  if (s == "auto" || s.empty()) return v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoul(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad node index '" + item + "' in list '" + s + "'");
    }
  }
  return v;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

json ledger_json(const Ledger& l) {
  return {{"repair_symbols", l.repair_symbols},
          {"repair2_symbols", l.repair2_symbols},
          {"download_symbols", l.download_symbols},
          {"operations", l.entries.size()}};
}

json params_json(const CodeParams& p) {
  return {{"n", p.n}, {"k", p.k}, {"d", p.d}, {"t", p.t}, {"alpha", p.alpha},
          {"beta", p.beta}, {"M", p.M}, {"flavor", to_string(p.flavor)}};
}

void print(const Options& o, const json& j, const std::string& text) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

/// Throws AxiomViolation with the offending subset when the family fails.
void require_axioms(const StarFamily& stars) {
  const AxiomReport r = verify_axioms(stars);
  if (!r.pass) throw AxiomViolation(r.describe());
}

StarFamily generate_base(const Options& o, std::size_t n, std::size_t k, std::size_t d) {
  const Flavor flavor = parse_flavor(o.flavor);
  const CodeParams p = derive_params(n, k, d, flavor);
  const Field& field = Field::get(parse_field_name(o.field.empty() ? "gf16" : o.field));
  if (o.source == "rs") {
    if (p.t != 2) throw InfeasibleParameters("the rs source builds t = 2 codes only (d = 2(k-1)); use --source search");
    return rs_stars_t2(field, n, k, flavor);
  }
  if (o.source == "search") {
    SearchConfig cfg;
    cfg.field = &field;
    cfg.k = k;
    cfg.d = d;
    cfg.flavor = flavor;
    cfg.x_pattern = o.x_pattern;
    cfg.second_pattern = o.y_pattern;
    cfg.max_pool = n;
    const PoolResult r = grow_pool(cfg);
    if (!r.found || r.points.size() < n) {
      throw InfeasibleParameters(r.found ? "search failed: pool of " + std::to_string(r.points.size()) +
                                               " points over " + field.name() + ", need n = " + std::to_string(n)
                                         : r.diagnostic);
    }
    return *r.family;
  }
  throw UsageError("unknown source '" + o.source + "' (rs, search)");
}

int cmd_gen(const Options& o) {
  StarFamily stars;
  std::vector<std::size_t> pinned;
  if (!o.fixture.empty()) {
    if (o.fixture != "atrahasis-956") throw UsageError("unknown fixture '" + o.fixture + "' (atrahasis-956)");
    stars = fixture_atrahasis_956();
    const auto& p = stars.params;
    if ((o.n && o.n != p.n) || (o.k && o.k != p.k) || (o.d && o.d != p.d))
      throw UsageError("fixture atrahasis-956 has (n,k,d) = (9,5,6)");
  } else {
    if (o.n == 0 || o.k == 0 || o.d == 0) throw UsageError("gen needs --n, --k and --d (or --fixture)");
    if (!o.shorten_from.empty()) {
      const auto base = parse_index_list(o.shorten_from);
      if (base.size() != 3) throw UsageError("--shorten-from expects N,K,D");
      const std::size_t g = base[1] >= o.k ? base[1] - o.k : 0;
      if (base[0] != o.n + g || base[1] != o.k + g || base[2] != o.d + g || g == 0)
        throw UsageError("--shorten-from must be (n+g, k+g, d+g) for some g >= 1");
      stars = generate_base(o, base[0], base[1], base[2]);
      for (std::size_t h = base[0] - g; h < base[0]; ++h) pinned.push_back(h);
    } else {
      try {
        derive_params(o.n, o.k, o.d, parse_flavor(o.flavor));
      } catch (const InfeasibleParameters& e) {
        const std::size_t g = shortening_gap(o.k, o.d);
        throw InfeasibleParameters(std::string(e.what()) + "; try --shorten-from " + std::to_string(o.n + g) + "," +
                                   std::to_string(o.k + g) + "," + std::to_string(o.d + g));
      }
      stars = generate_base(o, o.n, o.k, o.d);
    }
  }
  require_axioms(stars);
  // Constructing the shortened code checks the pinned nodes.
  const ShortenedCode code(std::make_shared<const MsrCode>(stars), pinned);
  const std::string text = dump_code_spec(stars, pinned);
  write_output(o.out, text);
  if (!o.out.empty() && o.out != "-") {
    const CodeSpec spec = parse_code_spec(text);
    print(o, {{"command", "gen"}, {"path", o.out}, {"params", params_json(code.params())}, {"content_hash", spec.content_hash}},
          "wrote " + o.out + " (" + std::to_string(code.params().n) + "," + std::to_string(code.params().k) + "," +
              std::to_string(code.params().d) + "," + std::to_string(code.params().alpha) + ") over " +
              stars.field->name() + "\n");
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  if (o.spec.empty()) throw UsageError("verify needs a spec path");
  const CodeSpec spec = load_code_spec(o.spec);
  const AxiomReport r = verify_axioms(spec.stars);
  std::unique_ptr<ShortenedCode> code;
  std::string shorten_error;
  if (r.pass) {
    try {
      code = std::make_unique<ShortenedCode>(std::make_shared<const MsrCode>(spec.stars), spec.pinned);
    } catch (const AxiomViolation& e) {
      shorten_error = e.what();
    }
  }
  const bool ok = r.pass && shorten_error.empty() && spec.hash_ok;
  json j{{"command", "verify"},
         {"spec", o.spec},
         {"hash_ok", spec.hash_ok},
         {"axioms_pass", r.pass},
         {"params", params_json(spec.stars.params)},
         {"pass", ok}};
  std::string text;
  if (!spec.hash_ok) text += "content hash mismatch: the file was modified after it was written\n";
  if (!r.pass) {
    j["violation"] = {{"axiom", r.axiom}, {"subset", r.subset}, {"detail", r.describe()}};
    if (r.failed) j["violation"]["failed"] = *r.failed;
    text += "FAIL " + r.describe() + "\n";
  } else if (!shorten_error.empty()) {
    j["violation"] = {{"detail", shorten_error}};
    text += "FAIL " + shorten_error + "\n";
  } else {
    const auto& p = code->params();
    text += std::string(spec.hash_ok ? "OK" : "AXIOMS OK") + " (" + std::to_string(p.n) + "," + std::to_string(p.k) +
            "," + std::to_string(p.d) + "," + std::to_string(p.alpha) + ") " + to_string(p.flavor) + " over " +
            spec.stars.field->name() + "\n";
  }
  print(o, j, text);
  if (!r.pass || !shorten_error.empty()) return kAxiom;
  return spec.hash_ok ? kOk : kFailure;
}

int cmd_shorten(const Options& o) {
  if (o.spec.empty()) throw UsageError("shorten needs a spec path");
  const CodeSpec spec = load_code_spec(o.spec);
  if (!spec.hash_ok) throw IoError("code-spec content hash does not match its contents");
  const ShortenedCode current(std::make_shared<const MsrCode>(spec.stars), spec.pinned);
  const ShortenedCode next = current.shorten(o.delta);
  const std::string text = dump_code_spec(spec.stars, next.pinned());
  write_output(o.out, text);
  if (!o.out.empty() && o.out != "-") {
    const auto& p = next.params();
    print(o, {{"command", "shorten"}, {"path", o.out}, {"params", params_json(p)}, {"pinned", next.pinned()}},
          "wrote " + o.out + " (" + std::to_string(p.n) + "," + std::to_string(p.k) + "," + std::to_string(p.d) + "," +
              std::to_string(p.alpha) + ")\n");
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  const Field& field = Field::get(parse_field_name(o.field.empty() ? "gf127" : o.field));
  std::optional<std::size_t> max_k;
  if (o.max_k) max_k = o.max_k;
  const auto reports = sweep_small_cases(o.alpha_cap, field, o.seed, o.max_redraws, max_k, parse_flavor(o.flavor));
  std::size_t inconclusive = 0;
  for (const auto& r : reports) inconclusive += r.verdict == Verdict::Inconclusive;
  if (o.json) {
    json rows = json::array();
    for (const auto& r : reports)
      rows.push_back({{"k", r.k}, {"d", r.d}, {"t", r.t}, {"alpha", r.alpha}, {"field", field.name()},
                      {"redraws", r.redraws}, {"verdict", to_string(r.verdict)}});
    std::cout << json{{"command", "sweep"}, {"cases", reports.size()}, {"inconclusive", inconclusive}, {"rows", rows}}
                     .dump(2)
              << "\n";
  } else if (o.out.empty() || o.out == "-") {
    write_sweep_tsv(std::cout, reports);
  } else {
    std::ostringstream os;
    write_sweep_tsv(os, reports);
    write_file_atomic(o.out, os.str());
    std::cout << reports.size() << " cases, " << inconclusive << " inconclusive; table in " << o.out << "\n";
  }
  return inconclusive == 0 ? kOk : kFailure;
}

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path.empty()) throw UsageError("missing input file");
  return read_file(path);
}

void ensure_cluster(const Options& o) {
  if (Cluster::exists(o.store)) {
    if (!o.spec.empty()) {
      const CodeSpec given = load_code_spec(o.spec);
      const CodeSpec stored = load_code_spec(fs::path(o.store) / "code.spec");
      if (given.content_hash != stored.content_hash)
        throw UsageError("store " + o.store + " was created from a different code-spec");
    }
    return;
  }
  if (o.spec.empty()) throw UsageError("no cluster in " + o.store + "; pass --spec to create one");
  const auto bytes = read_file(o.spec);
  Cluster::init(o.store, std::string(bytes.begin(), bytes.end()));
}

int cmd_put(const Options& o) {
  const auto data = read_input(o.file);
  ensure_cluster(o);
  Cluster c(o.store);
  c.put(data);
  const StoredObject& obj = *c.object();
  print(o,
        {{"command", "put"}, {"bytes", obj.original_length}, {"stripes", obj.stripes}, {"blobs", obj.blobs},
         {"padding_symbols", obj.padding_symbols}, {"params", params_json(c.code().params())}},
        "stored " + std::to_string(obj.original_length) + " bytes as " + std::to_string(obj.stripes) + " stripes on " +
            std::to_string(c.code().params().n) + " nodes\n");
  return kOk;
}

int cmd_get(const Options& o) {
  if (o.file.empty()) throw UsageError("get needs an output path");
  Cluster c(o.store);
  const auto data = c.get(parse_index_list(o.nodes));
  write_file_atomic(o.file, std::span<const std::uint8_t>(data));
  const LedgerEntry& e = c.ledger().entries.back();
  print(o, {{"command", "get"}, {"bytes", data.size()}, {"nodes", e.nodes}, {"ledger", ledger_json(c.ledger())}},
        "wrote " + std::to_string(data.size()) + " bytes to " + o.file + "\n");
  return kOk;
}

int cmd_fail(const Options& o) {
  Cluster c(o.store);
  c.fail(o.node);
  print(o, {{"command", "fail"}, {"node", o.node}, {"live", c.live_nodes()}},
        "node " + std::to_string(o.node) + " failed\n");
  return kOk;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

int report_repair(const Options& o, const Cluster& c, const RepairReport& r, const std::string& op) {
  const std::uint64_t per_stripe = r.stripes ? r.symbols / r.stripes : 0;
  print(o,
        {{"command", op}, {"repaired", r.repaired}, {"helpers", r.helpers}, {"stripes", r.stripes},
         {"symbols", r.symbols}, {"symbols_per_stripe", per_stripe}, {"ledger", ledger_json(c.ledger())}},
        "repaired node(s) " + join(r.repaired) + " from helpers " + join(r.helpers) + ": " +
            std::to_string(r.symbols) + " symbols (" + std::to_string(per_stripe) + " per stripe)\n");
  return kOk;
}

int cmd_repair(const Options& o) {
  Cluster c(o.store);
  const RepairReport r = c.repair(o.node, parse_index_list(o.helpers));
  return report_repair(o, c, r, "repair");
}

int cmd_repair2(const Options& o) {
  Cluster c(o.store);
  const RepairReport r =
      c.repair2(o.node, o.node2, parse_two_repair_strategy(o.strategy), parse_index_list(o.helpers));
  return report_repair(o, c, r, "repair2");
}

int cmd_status(const Options& o) {
  Cluster c(o.store);
  json st = json::array();
  std::string text;
  for (std::size_t h = 0; h < c.status().size(); ++h) {
    const bool live = c.status()[h] == NodeStatus::Live;
    st.push_back(live ? "live" : "failed");
    text += "node " + std::to_string(h) + ": " + (live ? "live" : "failed") + "\n";
  }
  const auto problems = c.check_store();
  for (const auto& p : problems) text += "problem: " + p + "\n";
  text += "repair symbols: " + std::to_string(c.ledger().repair_symbols) +
          ", repair2 symbols: " + std::to_string(c.ledger().repair2_symbols) + "\n";
  print(o, {{"command", "status"}, {"node_status", st}, {"problems", problems}, {"ledger", ledger_json(c.ledger())}},
        text);
  return problems.empty() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MSR regenerating codes: generate, verify and run a simulated storage cluster"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_option("--store", o.store, "Cluster directory")->capture_default_str();
  app.add_option("--spec", o.spec, "Code-spec file");
  app.add_option("--field", o.field, "Field, e.g. gf16, gf256, gf127");
  app.add_option("--seed", o.seed, "PRNG seed")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "Write a verified code-spec");
  gen->add_option("--n", o.n);
  gen->add_option("--k", o.k);
  gen->add_option("--d", o.d);
  gen->add_option("--flavor", o.flavor, "symmetric or exterior")->capture_default_str();
  gen->add_option("--source", o.source, "rs (t = 2) or search")->capture_default_str();
  gen->add_option("--fixture", o.fixture, "Built-in family: atrahasis-956");
  gen->add_option("--shorten-from", o.shorten_from, "Build (N,K,D) and shorten it, e.g. 6,5,6");
  gen->add_option("--x-pattern", o.x_pattern, "Exponents of x stars for --source search")->delimiter(',');
  gen->add_option("--y-pattern", o.y_pattern, "Exponents of y (or w) stars for --source search")->delimiter(',');
  gen->add_option("-o,--out", o.out, "Output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check every axiom subset of a code-spec");
  verify->add_option("spec", o.spec, "Code-spec file");

  auto* shorten_cmd = app.add_subcommand("shorten", "Retire nodes of a code-spec");
  shorten_cmd->add_option("spec", o.spec, "Code-spec file");
  shorten_cmd->add_option("--delta", o.delta)->capture_default_str();
  shorten_cmd->add_option("-o,--out", o.out, "Output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Randomized nonzero-determinant witnesses for small cases");
  sweep->add_option("alpha_cap", o.alpha_cap)->capture_default_str();
  sweep->add_option("--max-redraws", o.max_redraws)->capture_default_str();
  sweep->add_option("--max-k", o.max_k, "Largest k (default alpha_cap + 1)");
  sweep->add_option("--flavor", o.flavor)->capture_default_str();
  sweep->add_option("-o,--out", o.out, "TSV output path (default stdout)");

  auto* put = app.add_subcommand("put", "Store a file on the cluster");
  put->add_option("file", o.file)->required();

  auto* get = app.add_subcommand("get", "Rebuild the stored file from k nodes");
  get->add_option("file", o.file, "Output path")->required();
  get->add_option("--nodes", o.nodes, "auto or a list such as 0,2,4,6,8")->capture_default_str();

  auto* fail = app.add_subcommand("fail", "Mark a node failed and delete its blobs");
  fail->add_option("node", o.node)->required();

  auto* repair = app.add_subcommand("repair", "Regenerate one failed node");
  repair->add_option("node", o.node)->required();
  repair->add_option("--helpers", o.helpers, "auto or a list of d live nodes")->capture_default_str();

  auto* repair2 = app.add_subcommand("repair2", "Regenerate two failed nodes through a central agent (t = 3)");
  repair2->add_option("f", o.node)->required();
  repair2->add_option("g", o.node2)->required();
  repair2->add_option("--strategy", o.strategy, "naive, cascade or subspace")->capture_default_str();
  repair2->add_option("--helpers", o.helpers, "auto or a list of d live nodes")->capture_default_str();

  auto* status = app.add_subcommand("status", "Show node status, blob problems and the ledger");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*verify) return cmd_verify(o);
    if (*shorten_cmd) return cmd_shorten(o);
    if (*sweep) return cmd_sweep(o);
    if (*put) return cmd_put(o);
    if (*get) return cmd_get(o);
    if (*fail) return cmd_fail(o);
    if (*repair) return cmd_repair(o);
    if (*repair2) return cmd_repair2(o);
    if (*status) return cmd_status(o);
  } catch (const Error& e) {
    std::cerr << "atrahasis: " << kind_name(e.kind()) << ": " << e.what() << "\n";
    if (o.json) std::cout << json{{"error", kind_name(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "atrahasis: io: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
