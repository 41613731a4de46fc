#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "atrahasis/errors.hpp"

namespace atrahasis {

/// Raw canonical representative of a field element. For GF(2^m) the bits are
/// the polynomial coefficients (bit i <-> z^i); for GF(p) it is the residue.
using Elem = std::uint32_t;

enum class FieldKind { BinaryExtension, Prime };

/// Defining data of a field: GF(2^m) with a reduction polynomial, or GF(p).
struct FieldSpec {
  FieldKind kind = FieldKind::BinaryExtension;
  unsigned m = 0;                   // extension degree, binary case
  std::uint32_t reduction_poly = 0; // includes the z^m bit, binary case
  std::uint32_t p = 0;              // modulus, prime case

  static FieldSpec binary(unsigned m, std::optional<std::uint32_t> poly = std::nullopt);
  static FieldSpec prime(std::uint32_t p);

  std::uint32_t order() const;
  std::string name() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Built-in reduction polynomial for GF(2^m), m in [1, 16]. m = 4 gives z^4 + z + 1.
std::uint32_t default_reduction_poly(unsigned m);

/// Exhaustive trial division over GF(2)[z]; `poly` must have degree <= 31.
bool is_irreducible_gf2(std::uint32_t poly);

bool is_prime(std::uint32_t p);

/// Parses field names such as "gf16", "GF(2^4)", "gf127", "p127".
FieldSpec parse_field_name(const std::string& name);

/// A validated finite field with its arithmetic tables.
///
/// Fields are interned: Field::get returns the same object for equal specs,
/// so identity comparison of `const Field*` is field equality. Interned fields
/// live for the whole process and are immutable, hence shareable across threads.
class Field {
 public:
  static const Field& get(const FieldSpec& spec);
  static const Field& binary(unsigned m) { return get(FieldSpec::binary(m)); }
  static const Field& prime(std::uint32_t p) { return get(FieldSpec::prime(p)); }

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t order() const { return order_; }
  bool is_binary() const { return spec_.kind == FieldKind::BinaryExtension; }
  std::uint32_t characteristic() const { return is_binary() ? 2 : spec_.p; }
  std::string name() const { return spec_.name(); }

  Elem add(Elem a, Elem b) const {
    if (is_binary()) return a ^ b;
    const std::uint32_t s = a + b;
    return s >= spec_.p ? s - spec_.p : s;
  }
  Elem neg(Elem a) const {
    if (is_binary() || a == 0) return a;
    return spec_.p - a;
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (is_binary()) return exp_[log_[a] + log_[b]];
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % spec_.p);
  }
  /// a + b·c, the inner step of every elimination loop.
  Elem mul_add(Elem a, Elem b, Elem c) const { return add(a, mul(b, c)); }

  /// Throws DomainError for a = 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  /// pow(a, 0) = 1 for every a, including 0. Negative e requires a != 0.
  Elem pow(Elem a, long long e) const;

  /// Maps an integer into the field: residue mod p, or the bit pattern itself
  /// (which must be < 2^m) in the binary case.
  Elem from_int(long long v) const;
  bool contains(Elem a) const { return a < order_; }

  /// A generator of the multiplicative group.
  Elem generator() const { return generator_; }

  /// 0 first, then the nonzero elements in increasing representative order.
  std::vector<Elem> elements() const;

  /// Bytes per element on disk: ceil(m/8) (binary) or the minimal width for p-1.
  unsigned symbol_bytes() const { return symbol_bytes_; }
  /// Number of payload bits an element can carry losslessly when packing bytes.
  unsigned payload_bits() const { return payload_bits_; }
  /// Little-endian for binary fields, big-endian for prime fields.
  void write_symbol(Elem a, std::span<std::uint8_t> out) const;
  Elem read_symbol(std::span<const std::uint8_t> in) const;

  std::string to_hex(Elem a) const;
  /// Accepts "0x1f" or "1f"; throws UsageError when out of range.
  Elem from_hex(const std::string& s) const;

 private:
  explicit Field(const FieldSpec& spec);
  Elem slow_mul(Elem a, Elem b) const;

  FieldSpec spec_;
  std::uint32_t order_ = 0;
  Elem generator_ = 0;
  unsigned symbol_bytes_ = 1;
  unsigned payload_bits_ = 1;
  // Binary case: exp_ has 2(q-1) entries so log a + log b never needs a modulus.
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
};

/// An element bound to its field. Arithmetic between elements of different
/// fields throws UsageError.
class FieldElement {
 public:
  FieldElement(const Field& field, Elem value);

  const Field& field() const { return *field_; }
  Elem value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const { return {*field_, field_->neg(value_)}; }
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  FieldElement inv() const { return {*field_, field_->inv(value_)}; }
  FieldElement pow(long long e) const { return {*field_, field_->pow(value_, e)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  void check_same(const FieldElement& o) const;

  const Field* field_;
  Elem value_;
};

std::vector<FieldElement> enumerate_elements(const Field& field);

}  // namespace atrahasis
