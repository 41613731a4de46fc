#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "atrahasis/code_spec.hpp"
#include "atrahasis/transforms.hpp"

namespace atrahasis {

/// Packs an 8-byte little-endian length prefix followed by `data` into
/// symbols of field.payload_bits() bits each (LSB first), zero-padded to a
/// multiple of `stripe_symbols` (at least one stripe).
std::vector<Elem> pack_bytes(const Field& field, std::span<const std::uint8_t> data, std::size_t stripe_symbols);
/// Inverse of pack_bytes; throws IoError if the symbols cannot have come from it.
std::vector<std::uint8_t> unpack_bytes(const Field& field, std::span<const Elem> symbols);

/// Blob file: 16-byte header then count·α symbols.
///   bytes 0-3  "ATRA"
///   4-5        format version (u16 LE)
///   6-7        node index (u16 LE)
///   8-11       params hash (u32 LE)
///   12-15      stripe count (u32 LE)
struct BlobHeader {
  static constexpr std::uint16_t kVersion = 1;
  std::uint16_t node = 0;
  std::uint32_t params_hash = 0;
  std::uint32_t stripes = 0;
};
std::vector<std::uint8_t> encode_blob(const Field& field, const BlobHeader& header, std::span<const Elem> symbols);
/// Throws IoError on a bad magic, version, or truncated payload.
BlobHeader decode_blob(const Field& field, std::span<const std::uint8_t> bytes, std::vector<Elem>& symbols);

enum class NodeStatus { Live, Failed };

struct LedgerEntry {
  std::string op;
  std::vector<std::size_t> nodes;    // repaired nodes, or nodes read by get
  std::vector<std::size_t> helpers;
  std::uint64_t stripes = 0;
  std::uint64_t symbols = 0;
};

/// Symbols moved between nodes, per kind of operation.
struct Ledger {
  std::uint64_t repair_symbols = 0;
  std::uint64_t repair2_symbols = 0;
  std::uint64_t download_symbols = 0;
  std::vector<LedgerEntry> entries;
};

struct StoredObject {
  std::uint64_t original_length = 0;
  std::uint64_t stripes = 0;
  std::uint64_t blobs = 0;
  std::uint64_t padding_symbols = 0;
  std::vector<std::vector<std::string>> digests;  // [node][blob], SHA-256 hex of the blob file
};

struct RepairReport {
  std::vector<std::size_t> repaired;
  std::vector<std::size_t> helpers;
  std::uint64_t stripes = 0;
  std::uint64_t symbols = 0;
};

/// One storage cluster in a directory:
///   <root>/code.spec, <root>/manifest.json, <root>/node_<h>/chunk_<i>.blob
/// Each blob holds up to kStripesPerBlob stripes of one node. Opening a
/// cluster takes an exclusive lock on <root>/.lock for the object's lifetime.
class Cluster {
 public:
  static constexpr std::size_t kStripesPerBlob = 4096;

  /// Creates a fresh cluster from code-spec text. Throws UsageError if
  /// `root` already holds one, IoError if the spec's hash does not match.
  static void init(const std::filesystem::path& root, const std::string& spec_text);
  static bool exists(const std::filesystem::path& root);

  explicit Cluster(const std::filesystem::path& root);
  ~Cluster();
  Cluster(const Cluster&) = delete;
  Cluster& operator=(const Cluster&) = delete;

  const ShortenedCode& code() const { return *code_; }
  const CodeSpec& spec() const { return spec_; }
  const Ledger& ledger() const { return ledger_; }
  const std::vector<NodeStatus>& status() const { return status_; }
  const StoredObject* object() const { return has_object_ ? &object_ : nullptr; }
  std::vector<std::size_t> live_nodes() const;

  /// Stores `data`, replacing any previous object. Failed nodes receive no
  /// blobs, but their digests are recorded so a later repair can be checked.
  void put(std::span<const std::uint8_t> data);
  /// Reads exactly k nodes (the k lowest live ones when `nodes` is empty).
  std::vector<std::uint8_t> get(const std::vector<std::size_t>& nodes = {});
  void fail(std::size_t h);
  /// Helpers default to the d lowest live nodes.
  RepairReport repair(std::size_t f, const std::vector<std::size_t>& helpers = {});
  /// Both nodes must be failed; needs an unshortened t = 3 symmetric code.
  RepairReport repair2(std::size_t f, std::size_t g, TwoRepairStrategy strategy,
                       const std::vector<std::size_t>& helpers = {});

  /// Re-reads every live blob and checks header and digest; returns problems found.
  std::vector<std::string> check_store();

 private:
  std::filesystem::path blob_path(std::size_t node, std::uint64_t blob) const;
  std::uint32_t blob_stripes(std::uint64_t blob) const;
  /// Reads and validates a live node's blob; returns α·stripes symbols.
  std::vector<Elem> read_blob(std::size_t node, std::uint64_t blob) const;
  /// Writes a regenerated blob after checking it against the recorded digest.
  void write_repaired_blob(std::size_t node, std::uint64_t blob, std::span<const Elem> symbols);
  void save_manifest() const;
  void load_manifest();
  void check_node(std::size_t h) const;
  const StoredObject& require_object() const;
  std::vector<std::size_t> pick_helpers(const std::vector<std::size_t>& requested, std::size_t need,
                                        const std::vector<std::size_t>& exclude) const;

  std::filesystem::path root_;
  int lock_fd_ = -1;
  CodeSpec spec_;
  std::unique_ptr<ShortenedCode> code_;
  std::vector<NodeStatus> status_;
  Ledger ledger_;
  bool has_object_ = false;
  StoredObject object_;
};

}  // namespace atrahasis
