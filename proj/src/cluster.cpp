#include "atrahasis/cluster.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <set>

#include "atrahasis/errors.hpp"
#include "json.hpp"

namespace atrahasis {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Byte <-> symbol packing

std::vector<Elem> pack_bytes(const Field& field, std::span<const std::uint8_t> data, std::size_t stripe_symbols) {
  if (stripe_symbols == 0) throw UsageError("stripe size must be positive");
  const unsigned b = field.payload_bits();
  const std::uint64_t mask = (std::uint64_t{1} << b) - 1;
  std::vector<Elem> out;
  out.reserve((8 + data.size()) * 8 / b + stripe_symbols + 1);
  std::uint64_t acc = 0;
  unsigned nbits = 0;
  auto push = [&](std::uint8_t byte) {
    acc |= std::uint64_t{byte} << nbits;
    nbits += 8;
    while (nbits >= b) {
      out.push_back(static_cast<Elem>(acc & mask));
      acc >>= b;
      nbits -= b;
    }
  };
  const std::uint64_t len = data.size();
  for (int i = 0; i < 8; ++i) push(static_cast<std::uint8_t>(len >> (8 * i)));
  for (std::uint8_t byte : data) push(byte);
  if (nbits > 0) out.push_back(static_cast<Elem>(acc & mask));
  const std::size_t stripes = (out.size() + stripe_symbols - 1) / stripe_symbols;
  out.resize(std::max<std::size_t>(stripes, 1) * stripe_symbols, 0);
  return out;
}

std::vector<std::uint8_t> unpack_bytes(const Field& field, std::span<const Elem> symbols) {
  const unsigned b = field.payload_bits();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(symbols.size() * b / 8);
  std::uint64_t acc = 0;
  unsigned nbits = 0;
  for (Elem s : symbols) {
    if (s >> b) throw IoError("symbol exceeds the payload width; stored data is corrupt");
    acc |= std::uint64_t{s} << nbits;
    nbits += b;
    while (nbits >= 8) {
      bytes.push_back(static_cast<std::uint8_t>(acc & 0xff));
      acc >>= 8;
      nbits -= 8;
    }
  }
  if (bytes.size() < 8) throw IoError("stored data is shorter than its length prefix");
  std::uint64_t len = 0;
  for (int i = 7; i >= 0; --i) len = (len << 8) | bytes[i];
  if (len > bytes.size() - 8) throw IoError("length prefix exceeds the stored data");
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(len)};
}

// ---------------------------------------------------------------------------
// Blobs

namespace {

constexpr char kMagic[4] = {'A', 'T', 'R', 'A'};

void put_le(std::uint8_t* p, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_blob(const Field& field, const BlobHeader& header, std::span<const Elem> symbols) {
  const unsigned sb = field.symbol_bytes();
  std::vector<std::uint8_t> out(16 + symbols.size() * sb);
  std::memcpy(out.data(), kMagic, 4);
  put_le(out.data() + 4, BlobHeader::kVersion, 2);
  put_le(out.data() + 6, header.node, 2);
  put_le(out.data() + 8, header.params_hash, 4);
  put_le(out.data() + 12, header.stripes, 4);
  for (std::size_t i = 0; i < symbols.size(); ++i)
    field.write_symbol(symbols[i], std::span<std::uint8_t>(out.data() + 16 + i * sb, sb));
  return out;
}

BlobHeader decode_blob(const Field& field, std::span<const std::uint8_t> bytes, std::vector<Elem>& symbols) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError("not a blob (bad magic)");
  if (get_le(bytes.data() + 4, 2) != BlobHeader::kVersion) throw IoError("unsupported blob version");
  BlobHeader h;
  h.node = static_cast<std::uint16_t>(get_le(bytes.data() + 6, 2));
  h.params_hash = static_cast<std::uint32_t>(get_le(bytes.data() + 8, 4));
  h.stripes = static_cast<std::uint32_t>(get_le(bytes.data() + 12, 4));
  const unsigned sb = field.symbol_bytes();
  if ((bytes.size() - 16) % sb != 0) throw IoError("blob payload is truncated");
  const std::size_t count = (bytes.size() - 16) / sb;
  symbols.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    symbols[i] = field.read_symbol(bytes.subspan(16 + i * sb, sb));
    if (!field.contains(symbols[i])) throw IoError("blob holds an out-of-range symbol");
  }
  return h;
}

// ---------------------------------------------------------------------------
// Cluster

bool Cluster::exists(const fs::path& root) { return fs::exists(root / "manifest.json"); }

void Cluster::init(const fs::path& root, const std::string& spec_text) {
  if (exists(root)) throw UsageError("a cluster already exists in " + root.string());
  const CodeSpec spec = parse_code_spec(spec_text);
  if (!spec.hash_ok) throw IoError("code-spec content hash does not match its contents");
  // Building the code checks that the pinned nodes are usable.
  const ShortenedCode code(std::make_shared<const MsrCode>(spec.stars), spec.pinned);
  fs::create_directories(root);
  write_file_atomic(root / "code.spec", spec_text);
  json m;
  m["format"] = "atrahasis-cluster";
  m["version"] = 1;
  m["spec_hash"] = spec.content_hash;
  m["params_hash"] = spec.params_hash();
  m["node_status"] = std::vector<std::string>(code.params().n, "live");
  m["object"] = nullptr;
  m["ledger"] = {{"repair_symbols", 0}, {"repair2_symbols", 0}, {"download_symbols", 0}, {"entries", json::array()}};
  write_file_atomic(root / "manifest.json", m.dump(2) + "\n");
}

Cluster::Cluster(const fs::path& root) : root_(root) {
  if (!exists(root_)) throw UsageError("no cluster in " + root_.string() + " (run put with --spec first)");
  lock_fd_ = ::open((root_ / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
  if (lock_fd_ < 0 || ::flock(lock_fd_, LOCK_EX) != 0) throw IoError("cannot lock " + root_.string());
  spec_ = load_code_spec(root_ / "code.spec");
  if (!spec_.hash_ok) throw IoError("stored code-spec fails its content hash");
  code_ = std::make_unique<ShortenedCode>(std::make_shared<const MsrCode>(spec_.stars), spec_.pinned);
  load_manifest();
}

Cluster::~Cluster() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Cluster::load_manifest() {
  const auto bytes = read_file(root_ / "manifest.json");
  json m;
  try {
    m = json::parse(bytes.begin(), bytes.end());
    if (m.at("spec_hash").get<std::string>() != spec_.content_hash)
      throw IoError("manifest belongs to a different code-spec");
    if (m.at("params_hash").get<std::uint32_t>() != spec_.params_hash()) throw IoError("manifest params hash mismatch");
    status_.clear();
    for (const auto& s : m.at("node_status")) status_.push_back(s.get<std::string>() == "live" ? NodeStatus::Live : NodeStatus::Failed);
    if (status_.size() != code_->params().n) throw IoError("manifest lists the wrong number of nodes");
    has_object_ = !m.at("object").is_null();
    if (has_object_) {
      const json& o = m["object"];
      object_.original_length = o.at("original_length");
      object_.stripes = o.at("stripes");
      object_.blobs = o.at("blobs");
      object_.padding_symbols = o.at("padding_symbols");
      object_.digests = o.at("digests").get<std::vector<std::vector<std::string>>>();
      if (o.at("stripes_per_blob").get<std::size_t>() != kStripesPerBlob) throw IoError("unsupported blob grouping");
    }
    const json& l = m.at("ledger");
    ledger_.repair_symbols = l.at("repair_symbols");
    ledger_.repair2_symbols = l.at("repair2_symbols");
    ledger_.download_symbols = l.at("download_symbols");
    ledger_.entries.clear();
    for (const auto& e : l.at("entries")) {
      ledger_.entries.push_back(LedgerEntry{e.at("op"), e.at("nodes").get<std::vector<std::size_t>>(),
                                            e.at("helpers").get<std::vector<std::size_t>>(), e.at("stripes"),
                                            e.at("symbols")});
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

void Cluster::save_manifest() const {
  json m;
  m["format"] = "atrahasis-cluster";
  m["version"] = 1;
  m["spec_hash"] = spec_.content_hash;
  m["params_hash"] = spec_.params_hash();
  json st = json::array();
  for (NodeStatus s : status_) st.push_back(s == NodeStatus::Live ? "live" : "failed");
  m["node_status"] = st;
  if (has_object_) {
    m["object"] = {{"original_length", object_.original_length}, {"stripes", object_.stripes},
                   {"blobs", object_.blobs},                     {"stripes_per_blob", kStripesPerBlob},
                   {"padding_symbols", object_.padding_symbols}, {"digests", object_.digests}};
  } else {
    m["object"] = nullptr;
  }
  json entries = json::array();
  for (const auto& e : ledger_.entries) {
    entries.push_back({{"op", e.op}, {"nodes", e.nodes}, {"helpers", e.helpers}, {"stripes", e.stripes},
                       {"symbols", e.symbols}});
  }
  m["ledger"] = {{"repair_symbols", ledger_.repair_symbols},
                 {"repair2_symbols", ledger_.repair2_symbols},
                 {"download_symbols", ledger_.download_symbols},
                 {"entries", entries}};
  write_file_atomic(root_ / "manifest.json", m.dump(2) + "\n");
}

std::vector<std::size_t> Cluster::live_nodes() const {
  std::vector<std::size_t> v;
  for (std::size_t h = 0; h < status_.size(); ++h) {
    if (status_[h] == NodeStatus::Live) v.push_back(h);
  }
  return v;
}

void Cluster::check_node(std::size_t h) const {
  if (h >= status_.size()) throw UsageError("node " + std::to_string(h) + " out of range (n = " + std::to_string(status_.size()) + ")");
}

const StoredObject& Cluster::require_object() const {
  if (!has_object_) throw UsageError("the cluster holds no file (run put first)");
  return object_;
}

fs::path Cluster::blob_path(std::size_t node, std::uint64_t blob) const {
  return root_ / ("node_" + std::to_string(node)) / ("chunk_" + std::to_string(blob) + ".blob");
}

std::uint32_t Cluster::blob_stripes(std::uint64_t blob) const {
  const std::uint64_t first = blob * kStripesPerBlob;
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(kStripesPerBlob, object_.stripes - first));
}

std::vector<Elem> Cluster::read_blob(std::size_t node, std::uint64_t blob) const {
  const fs::path path = blob_path(node, blob);
  const auto bytes = read_file(path);
  if (sha256_hex(bytes) != object_.digests[node][blob]) throw IoError(path.string() + " fails its recorded digest");
  std::vector<Elem> symbols;
  const BlobHeader h = decode_blob(code_->field(), bytes, symbols);
  if (h.node != node || h.params_hash != spec_.params_hash() || h.stripes != blob_stripes(blob) ||
      symbols.size() != std::size_t{h.stripes} * code_->params().alpha)
    throw IoError(path.string() + " header does not match the cluster");
  return symbols;
}

void Cluster::write_repaired_blob(std::size_t node, std::uint64_t blob, std::span<const Elem> symbols) {
  const BlobHeader h{static_cast<std::uint16_t>(node), spec_.params_hash(), blob_stripes(blob)};
  const auto bytes = encode_blob(code_->field(), h, symbols);
  if (sha256_hex(bytes) != object_.digests[node][blob])
    throw InternalError("regenerated blob " + std::to_string(blob) + " of node " + std::to_string(node) +
                        " differs from the recorded digest");
  fs::create_directories(blob_path(node, blob).parent_path());
  write_file_atomic(blob_path(node, blob), bytes);
}

void Cluster::put(std::span<const std::uint8_t> data) {
  const ShortenedCode& code = *code_;
  const auto& p = code.params();
  const Field& f = code.field();
  const std::vector<Elem> symbols = pack_bytes(f, data, p.M);
  const std::uint64_t stripes = symbols.size() / p.M;
  const std::uint64_t used = ((8 + data.size()) * 8 + f.payload_bits() - 1) / f.payload_bits();

  StoredObject obj;
  obj.original_length = data.size();
  obj.stripes = stripes;
  obj.blobs = (stripes + kStripesPerBlob - 1) / kStripesPerBlob;
  obj.padding_symbols = symbols.size() - used;
  obj.digests.assign(p.n, std::vector<std::string>(obj.blobs));

  std::vector<Matrix> encoders;
  for (std::size_t h = 0; h < p.n; ++h) encoders.push_back(code.node_encoder(h));

  // Drop the old object first so a half-written put never looks valid.
  has_object_ = false;
  for (std::size_t h = 0; h < p.n; ++h) fs::remove_all(root_ / ("node_" + std::to_string(h)));
  save_manifest();
  object_ = obj;

  for (std::uint64_t b = 0; b < obj.blobs; ++b) {
    const std::uint32_t count = blob_stripes(b);
    for (std::size_t h = 0; h < p.n; ++h) {
      std::vector<Elem> out(std::size_t{count} * p.alpha);
      for (std::uint32_t s = 0; s < count; ++s) {
        const std::size_t stripe = b * kStripesPerBlob + s;
        encoders[h].apply_into(std::span<const Elem>(symbols).subspan(stripe * p.M, p.M),
                               std::span<Elem>(out).subspan(std::size_t{s} * p.alpha, p.alpha));
      }
      const auto bytes = encode_blob(f, BlobHeader{static_cast<std::uint16_t>(h), spec_.params_hash(), count}, out);
      object_.digests[h][b] = sha256_hex(bytes);
      if (status_[h] == NodeStatus::Live) {
        fs::create_directories(blob_path(h, b).parent_path());
        write_file_atomic(blob_path(h, b), bytes);
      }
    }
  }
  has_object_ = true;
  save_manifest();
}

std::vector<std::uint8_t> Cluster::get(const std::vector<std::size_t>& requested) {
  const StoredObject& obj = require_object();
  const auto& p = code_->params();
  std::vector<std::size_t> nodes = requested;
  const auto live = live_nodes();
  if (nodes.empty()) {
    if (live.size() < p.k)
      throw InsufficientNodes("get needs k = " + std::to_string(p.k) + " live nodes, " + std::to_string(live.size()) +
                              " are live (short by " + std::to_string(p.k - live.size()) + ")");
    nodes.assign(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(p.k));
  }
  for (std::size_t h : nodes) {
    check_node(h);
    if (status_[h] != NodeStatus::Live) throw UsageError("node " + std::to_string(h) + " is failed");
  }
  if (std::set<std::size_t>(nodes.begin(), nodes.end()).size() != nodes.size())
    throw UsageError("node list has duplicates");
  if (nodes.size() < p.k)
    throw InsufficientNodes("get needs k = " + std::to_string(p.k) + " nodes, " + std::to_string(nodes.size()) +
                            " given (short by " + std::to_string(p.k - nodes.size()) + ")");
  if (nodes.size() > p.k) throw UsageError("get reads exactly k = " + std::to_string(p.k) + " nodes");

  const Matrix decoder = code_->download_decoder(nodes);
  std::vector<Elem> symbols(obj.stripes * p.M);
  std::vector<Elem> stacked(p.k * p.alpha);
  for (std::uint64_t b = 0; b < obj.blobs; ++b) {
    std::vector<std::vector<Elem>> blobs;
    for (std::size_t h : nodes) blobs.push_back(read_blob(h, b));
    const std::uint32_t count = blob_stripes(b);
    for (std::uint32_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < nodes.size(); ++i)
        std::copy_n(blobs[i].begin() + static_cast<std::ptrdiff_t>(s * p.alpha), p.alpha, stacked.begin() + static_cast<std::ptrdiff_t>(i * p.alpha));
      const std::size_t stripe = b * kStripesPerBlob + s;
      decoder.apply_into(stacked, std::span<Elem>(symbols).subspan(stripe * p.M, p.M));
    }
  }
  auto data = unpack_bytes(code_->field(), symbols);
  if (data.size() != obj.original_length) throw IoError("decoded length differs from the manifest");
  const std::uint64_t moved = obj.stripes * p.k * p.alpha;
  ledger_.download_symbols += moved;
  ledger_.entries.push_back(LedgerEntry{"get", nodes, {}, obj.stripes, moved});
  save_manifest();
  return data;
}

void Cluster::fail(std::size_t h) {
  check_node(h);
  if (status_[h] == NodeStatus::Failed) throw UsageError("node " + std::to_string(h) + " is already failed");
  status_[h] = NodeStatus::Failed;
  save_manifest();
  fs::remove_all(root_ / ("node_" + std::to_string(h)));
}

std::vector<std::size_t> Cluster::pick_helpers(const std::vector<std::size_t>& requested, std::size_t need,
                                               const std::vector<std::size_t>& exclude) const {
  std::vector<std::size_t> helpers;
  if (requested.empty()) {
    for (std::size_t h : live_nodes()) {
      if (std::find(exclude.begin(), exclude.end(), h) == exclude.end() && helpers.size() < need) helpers.push_back(h);
    }
  } else {
    helpers = requested;
    for (std::size_t h : helpers) {
      check_node(h);
      if (status_[h] != NodeStatus::Live) throw UsageError("helper " + std::to_string(h) + " is not live");
    }
  }
  if (helpers.size() < need)
    throw InsufficientNodes("repair needs d = " + std::to_string(need) + " live helpers, " +
                            std::to_string(helpers.size()) + " available (short by " +
                            std::to_string(need - helpers.size()) + ")");
  return helpers;
}

RepairReport Cluster::repair(std::size_t f, const std::vector<std::size_t>& requested) {
  check_node(f);
  if (status_[f] != NodeStatus::Failed) throw UsageError("node " + std::to_string(f) + " is not failed");
  const auto& p = code_->params();
  const auto helpers = pick_helpers(requested, p.d, {f});
  const StoredObject& obj = require_object();

  std::vector<Matrix> encoders;
  for (std::size_t h : helpers) encoders.push_back(code_->help_encoder(h, f));
  const Matrix combiner = code_->repair_combiner(f, helpers);

  std::uint64_t symbols_moved = 0;
  std::vector<Elem> received(combiner.cols());
  for (std::uint64_t b = 0; b < obj.blobs; ++b) {
    std::vector<std::vector<Elem>> blobs;
    for (std::size_t h : helpers) blobs.push_back(read_blob(h, b));
    const std::uint32_t count = blob_stripes(b);
    std::vector<Elem> out(std::size_t{count} * p.alpha);
    for (std::uint32_t s = 0; s < count; ++s) {
      std::size_t off = 0;
      for (std::size_t i = 0; i < helpers.size(); ++i) {
        const Matrix& e = encoders[i];
        e.apply_into(std::span<const Elem>(blobs[i]).subspan(std::size_t{s} * p.alpha, p.alpha),
                     std::span<Elem>(received).subspan(off, e.rows()));
        off += e.rows();
      }
      symbols_moved += off;
      combiner.apply_into(received, std::span<Elem>(out).subspan(std::size_t{s} * p.alpha, p.alpha));
    }
    write_repaired_blob(f, b, out);
  }
  status_[f] = NodeStatus::Live;
  ledger_.repair_symbols += symbols_moved;
  ledger_.entries.push_back(LedgerEntry{"repair", {f}, helpers, obj.stripes, symbols_moved});
  save_manifest();
  return RepairReport{{f}, helpers, obj.stripes, symbols_moved};
}

RepairReport Cluster::repair2(std::size_t f, std::size_t g, TwoRepairStrategy strategy,
                              const std::vector<std::size_t>& requested) {
  check_node(f);
  check_node(g);
  if (code_->depth() != 0) throw UsageError("two-failure repair is not available on a shortened code");
  if (status_[f] != NodeStatus::Failed || status_[g] != NodeStatus::Failed)
    throw UsageError("repair2 expects both nodes to be failed");
  const auto& p = code_->params();
  const auto helpers = pick_helpers(requested, p.d, {f, g});
  const StoredObject& obj = require_object();
  const CentralRepairPlan plan = plan_central_repair_two(code_->base(), f, g, helpers, strategy);

  std::uint64_t symbols_moved = 0;
  std::vector<Elem> received(plan.total_bandwidth);
  for (std::uint64_t b = 0; b < obj.blobs; ++b) {
    std::vector<std::vector<Elem>> blobs;
    for (std::size_t h : helpers) blobs.push_back(read_blob(h, b));
    const std::uint32_t count = blob_stripes(b);
    std::vector<Elem> out_f(std::size_t{count} * p.alpha), out_g(std::size_t{count} * p.alpha);
    for (std::uint32_t s = 0; s < count; ++s) {
      std::size_t off = 0;
      for (std::size_t i = 0; i < helpers.size(); ++i) {
        const Matrix& e = plan.encoders[i];
        e.apply_into(std::span<const Elem>(blobs[i]).subspan(std::size_t{s} * p.alpha, p.alpha),
                     std::span<Elem>(received).subspan(off, e.rows()));
        off += e.rows();
      }
      symbols_moved += off;
      plan.combine_f.apply_into(received, std::span<Elem>(out_f).subspan(std::size_t{s} * p.alpha, p.alpha));
      plan.combine_g.apply_into(received, std::span<Elem>(out_g).subspan(std::size_t{s} * p.alpha, p.alpha));
    }
    write_repaired_blob(f, b, out_f);
    write_repaired_blob(g, b, out_g);
  }
  status_[f] = NodeStatus::Live;
  status_[g] = NodeStatus::Live;
  ledger_.repair2_symbols += symbols_moved;
  ledger_.entries.push_back(LedgerEntry{"repair2-" + to_string(strategy), {f, g}, helpers, obj.stripes, symbols_moved});
  save_manifest();
  return RepairReport{{f, g}, helpers, obj.stripes, symbols_moved};
}

std::vector<std::string> Cluster::check_store() {
  std::vector<std::string> problems;
  if (!has_object_) return problems;
  for (std::size_t h : live_nodes()) {
    for (std::uint64_t b = 0; b < object_.blobs; ++b) {
      try {
        read_blob(h, b);
      } catch (const Error& e) {
        problems.push_back(e.what());
      }
    }
  }
  return problems;
}

}  // namespace atrahasis
