#include "atrahasis/finite_field.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace atrahasis {

namespace {

int degree(std::uint32_t poly) { return poly == 0 ? -1 : 31 - std::countl_zero(poly); }

std::uint32_t gf2_mod(std::uint32_t a, std::uint32_t m) {
  const int dm = degree(m);
  for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
  return a;
}

constexpr std::uint32_t kDefaultPolys[17] = {
    0,       0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,    0x11D,
    0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

}  // namespace

std::uint32_t default_reduction_poly(unsigned m) {
  if (m < 1 || m > 16) throw UsageError("no built-in reduction polynomial for m = " + std::to_string(m));
  return kDefaultPolys[m];
}

bool is_irreducible_gf2(std::uint32_t poly) {
  const int d = degree(poly);
  if (d < 1) return false;
  // A reducible polynomial has a factor of degree <= d/2.
  for (std::uint32_t f = 2; degree(f) <= d / 2; ++f) {
    if (gf2_mod(poly, f) == 0) return false;
  }
  return true;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

FieldSpec FieldSpec::binary(unsigned m, std::optional<std::uint32_t> poly) {
  FieldSpec s;
  s.kind = FieldKind::BinaryExtension;
  s.m = m;
  s.reduction_poly = poly ? *poly : default_reduction_poly(m);
  return s;
}

FieldSpec FieldSpec::prime(std::uint32_t p) {
  FieldSpec s;
  s.kind = FieldKind::Prime;
  s.p = p;
  return s;
}

std::uint32_t FieldSpec::order() const {
  return kind == FieldKind::BinaryExtension ? (1u << m) : p;
}

std::string FieldSpec::name() const {
  if (kind == FieldKind::Prime) return "GF(" + std::to_string(p) + ")";
  return "GF(2^" + std::to_string(m) + ")";
}

FieldSpec parse_field_name(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  auto parse_uint = [&](const std::string& digits) -> std::uint64_t {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw UsageError("cannot parse field name '" + raw + "'");
    return std::stoull(digits);
  };
  std::string body;
  if (s.rfind("gf(2^", 0) == 0 && s.back() == ')') {
    return FieldSpec::binary(static_cast<unsigned>(parse_uint(s.substr(5, s.size() - 6))));
  }
  if (s.rfind("gf(", 0) == 0 && s.back() == ')') {
    body = s.substr(3, s.size() - 4);
  } else if (s.rfind("gf", 0) == 0) {
    body = s.substr(2);
  } else if (s.rfind("p", 0) == 0) {
    body = s.substr(1);
  } else {
    body = s;
  }
  const std::uint64_t q = parse_uint(body);
  if (q >= 2 && std::has_single_bit(q)) {
    return FieldSpec::binary(static_cast<unsigned>(std::countr_zero(q)));
  }
  if (q < (1ull << 31) && is_prime(static_cast<std::uint32_t>(q))) {
    return FieldSpec::prime(static_cast<std::uint32_t>(q));
  }
  throw UsageError("field order " + std::to_string(q) + " is neither a power of two nor a prime");
}

// ---------------------------------------------------------------------------

const Field& Field::get(const FieldSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<int, unsigned, std::uint32_t, std::uint32_t>, std::unique_ptr<Field>> interned;
  const auto key = std::make_tuple(static_cast<int>(spec.kind), spec.m, spec.reduction_poly, spec.p);
  std::lock_guard lock(mu);
  auto it = interned.find(key);
  if (it != interned.end()) return *it->second;
  std::unique_ptr<Field> f(new Field(spec));
  return *interned.emplace(key, std::move(f)).first->second;
}

Field::Field(const FieldSpec& spec) : spec_(spec) {
  if (spec.kind == FieldKind::BinaryExtension) {
    if (spec.m < 1 || spec.m > 16) throw UsageError("binary extension degree must be in [1, 16]");
    if (degree(spec.reduction_poly) != static_cast<int>(spec.m))
      throw UsageError("reduction polynomial degree does not match m = " + std::to_string(spec.m));
    if (!is_irreducible_gf2(spec.reduction_poly))
      throw UsageError("reduction polynomial " + to_hex(spec.reduction_poly) + " is reducible over GF(2)");
    order_ = 1u << spec.m;
    symbol_bytes_ = (spec.m + 7) / 8;
    payload_bits_ = spec.m;

    // The polynomial need not be primitive, so search for a generator.
    const std::uint32_t group = order_ - 1;
    std::vector<std::uint32_t> prime_factors;
    for (std::uint32_t q = 2, r = group; r > 1; ++q) {
      if (r % q == 0) {
        prime_factors.push_back(q);
        while (r % q == 0) r /= q;
      }
    }
    auto slow_pow = [&](Elem a, std::uint32_t e) {
      Elem acc = 1;
      while (e) {
        if (e & 1) acc = slow_mul(acc, a);
        a = slow_mul(a, a);
        e >>= 1;
      }
      return acc;
    };
    generator_ = 1;
    for (Elem g = 2; g < order_ && group > 1; ++g) {
      if (std::all_of(prime_factors.begin(), prime_factors.end(),
                      [&](std::uint32_t q) { return slow_pow(g, group / q) != 1; })) {
        generator_ = g;
        break;
      }
    }
    exp_.assign(2 * static_cast<std::size_t>(group) + 1, 0);
    log_.assign(order_, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < group; ++i) {
      exp_[i] = x;
      exp_[i + group] = x;
      log_[x] = i;
      x = slow_mul(x, generator_);
    }
    exp_[2 * static_cast<std::size_t>(group)] = 1;
  } else {
    if (!is_prime(spec.p) || spec.p >= (1u << 31)) throw UsageError(std::to_string(spec.p) + " is not a supported prime modulus");
    order_ = spec.p;
    symbol_bytes_ = std::max(1u, (static_cast<unsigned>(std::bit_width(spec.p - 1)) + 7) / 8);
    payload_bits_ = std::max(1, static_cast<int>(std::bit_width(spec.p)) - 1);
    generator_ = spec.p == 2 ? 1 : 0;
    // Smallest primitive root.
    std::vector<std::uint32_t> prime_factors;
    for (std::uint32_t q = 2, r = spec.p - 1; r > 1; ++q) {
      if (r % q == 0) {
        prime_factors.push_back(q);
        while (r % q == 0) r /= q;
      }
    }
    for (Elem g = 2; g < spec.p && generator_ == 0; ++g) {
      if (std::all_of(prime_factors.begin(), prime_factors.end(),
                      [&](std::uint32_t q) { return pow(g, (spec.p - 1) / q) != 1; }))
        generator_ = g;
    }
  }
}

Elem Field::slow_mul(Elem a, Elem b) const {
  std::uint32_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (a >> spec_.m) a ^= spec_.reduction_poly;
  }
  return acc;
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw DomainError("inverse of zero");
  if (is_binary()) {
    const std::uint32_t group = order_ - 1;
    return exp_[(group - log_[a]) % group];
  }
  return pow(a, static_cast<long long>(spec_.p) - 2);
}

Elem Field::pow(Elem a, long long e) const {
  if (e == 0) return 1;
  if (a == 0) {
    if (e < 0) throw DomainError("zero raised to a negative power");
    return 0;
  }
  const long long group = static_cast<long long>(order_) - 1;
  long long r = e % group;
  if (r < 0) r += group;
  if (is_binary()) {
    return exp_[static_cast<std::size_t>((static_cast<long long>(log_[a]) * r) % group)];
  }
  std::uint64_t base = a, acc = 1;
  auto u = static_cast<std::uint64_t>(r);
  while (u) {
    if (u & 1) acc = acc * base % spec_.p;
    base = base * base % spec_.p;
    u >>= 1;
  }
  return static_cast<Elem>(acc);
}

Elem Field::from_int(long long v) const {
  if (is_binary()) {
    if (v < 0 || v >= static_cast<long long>(order_))
      throw UsageError(std::to_string(v) + " is not a representative of " + name());
    return static_cast<Elem>(v);
  }
  long long r = v % static_cast<long long>(spec_.p);
  if (r < 0) r += spec_.p;
  return static_cast<Elem>(r);
}

std::vector<Elem> Field::elements() const {
  std::vector<Elem> out(order_);
  for (std::uint32_t i = 0; i < order_; ++i) out[i] = i;
  return out;
}

void Field::write_symbol(Elem a, std::span<std::uint8_t> out) const {
  if (out.size() < symbol_bytes_) throw UsageError("symbol buffer too small");
  for (unsigned i = 0; i < symbol_bytes_; ++i) {
    const unsigned shift = is_binary() ? 8 * i : 8 * (symbol_bytes_ - 1 - i);
    out[i] = static_cast<std::uint8_t>((a >> shift) & 0xff);
  }
}

Elem Field::read_symbol(std::span<const std::uint8_t> in) const {
  if (in.size() < symbol_bytes_) throw IoError("truncated symbol");
  Elem a = 0;
  for (unsigned i = 0; i < symbol_bytes_; ++i) {
    const unsigned shift = is_binary() ? 8 * i : 8 * (symbol_bytes_ - 1 - i);
    a |= static_cast<Elem>(in[i]) << shift;
  }
  if (!contains(a)) throw IoError("symbol value out of range for " + name());
  return a;
}

std::string Field::to_hex(Elem a) const {
  std::ostringstream os;
  os << std::hex << a;
  return os.str();
}

Elem Field::from_hex(const std::string& s) const {
  std::string body = s;
  if (body.rfind("0x", 0) == 0 || body.rfind("0X", 0) == 0) body = body.substr(2);
  if (body.empty() || !std::all_of(body.begin(), body.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); }))
    throw UsageError("malformed hex element '" + s + "'");
  const unsigned long long v = std::stoull(body, nullptr, 16);
  if (v >= order_) throw UsageError("element " + s + " out of range for " + name());
  return static_cast<Elem>(v);
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(const Field& field, Elem value) : field_(&field), value_(value) {
  if (!field.contains(value)) throw UsageError("value out of range for " + field.name());
}

void FieldElement::check_same(const FieldElement& o) const {
  if (field_ != o.field_) throw UsageError("arithmetic between " + field_->name() + " and " + o.field_->name());
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(o);
  return {*field_, field_->add(value_, o.value_)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(o);
  return {*field_, field_->sub(value_, o.value_)};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  return {*field_, field_->mul(value_, o.value_)};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(o);
  return {*field_, field_->div(value_, o.value_)};
}

std::vector<FieldElement> enumerate_elements(const Field& field) {
  std::vector<FieldElement> out;
  out.reserve(field.order());
  for (Elem e : field.elements()) out.emplace_back(field, e);
  return out;
}

}  // namespace atrahasis
