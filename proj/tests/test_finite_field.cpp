#include <random>
#include <set>

#include "atrahasis/finite_field.hpp"
#include "doctest.h"

using namespace atrahasis;

namespace {
// GF(16) over z^4 + z + 1, bit i <-> z^i.
constexpr Elem kZ = 0b0010;
}  // namespace

TEST_CASE("gf16 frozen values") {
  const Field& f = Field::binary(4);
  CHECK(f.spec().reduction_poly == 0x13);
  CHECK(f.mul(0b1000, kZ) == 0b0011);  // z^3 * z = z + 1
  CHECK(f.inv(kZ) == 0b1001);          // z^3 + 1
  CHECK(f.pow(kZ, 4) == 0b0011);
  CHECK(f.pow(kZ, -3) == f.pow(kZ, 12));
  CHECK(f.add(kZ, 0) == kZ);
  for (Elem a = 0; a < 16; ++a) CHECK(f.add(a, a) == 0);
  for (Elem a = 1; a < 16; ++a) CHECK(f.pow(a, 15) == 1);
  CHECK(f.pow(0, 0) == 1);
  CHECK_THROWS_AS(f.pow(0, -1), DomainError);
  CHECK_THROWS_AS(f.inv(0), DomainError);
}

TEST_CASE("slow multiplication agrees with tables") {
  // Independent shift-and-add product reduced by z^4 + z + 1.
  auto ref = [](Elem a, Elem b) {
    Elem r = 0;
    for (int i = 0; i < 4; ++i)
      if (b >> i & 1) r ^= a << i;
    for (int i = 7; i >= 4; --i)
      if (r >> i & 1) r ^= 0x13u << (i - 4);
    return r;
  };
  const Field& f = Field::binary(4);
  for (Elem a = 0; a < 16; ++a)
    for (Elem b = 0; b < 16; ++b) CHECK(f.mul(a, b) == ref(a, b));
}

TEST_CASE("gf127 frozen values") {
  const Field& f = Field::prime(127);
  CHECK(f.add(100, 50) == 23);
  CHECK(f.inv(2) == 64);
  CHECK(f.neg(1) == 126);
  CHECK(f.mul(126, 126) == 1);
}

TEST_CASE("element enumeration") {
  CHECK(Field::binary(2).elements() == std::vector<Elem>{0, 1, 2, 3});
  CHECK(Field::binary(1).elements() == std::vector<Elem>{0, 1});
  const auto all = Field::binary(4).elements();
  CHECK(all.size() == 16);
  CHECK(std::set<Elem>(all.begin(), all.end()).size() == 16);
  CHECK(enumerate_elements(Field::prime(7)).size() == 7);
}

TEST_CASE("field axioms exhaustively on small fields") {
  for (const Field* f : {&Field::binary(2), &Field::binary(3), &Field::binary(4), &Field::prime(5),
                         &Field::prime(7), &Field::prime(13)}) {
    const Elem q = f->order();
    for (Elem a = 0; a < q; ++a) {
      for (Elem b = 0; b < q; ++b) {
        REQUIRE(f->add(a, b) == f->add(b, a));
        REQUIRE(f->mul(a, b) == f->mul(b, a));
        for (Elem c = 0; c < q; ++c) {
          REQUIRE(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
          REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
          REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
        }
      }
      REQUIRE(f->add(a, f->neg(a)) == 0);
    }
  }
}

TEST_CASE("field axioms on random triples of larger fields") {
  std::mt19937 rng(7);
  for (const Field* f : {&Field::binary(8), &Field::binary(16), &Field::prime(127), &Field::prime(65521)}) {
    std::uniform_int_distribution<Elem> pick(0, f->order() - 1);
    for (int i = 0; i < 2000; ++i) {
      const Elem a = pick(rng), b = pick(rng), c = pick(rng);
      REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      if (a != 0) REQUIRE(f->mul(a, f->inv(a)) == 1);
    }
  }
}

TEST_CASE("inverse roundtrip up to 256 elements") {
  for (unsigned m = 1; m <= 8; ++m) {
    const Field& f = Field::binary(m);
    for (Elem a = 1; a < f.order(); ++a) REQUIRE(f.mul(a, f.inv(a)) == 1);
  }
  const Field& p = Field::prime(251);
  for (Elem a = 1; a < 251; ++a) REQUIRE(p.mul(a, p.inv(a)) == 1);
}

TEST_CASE("frobenius in gf16") {
  const Field& f = Field::binary(4);
  for (Elem a = 0; a < 16; ++a)
    for (Elem b = 0; b < 16; ++b) CHECK(f.pow(f.add(a, b), 2) == f.add(f.pow(a, 2), f.pow(b, 2)));
}

TEST_CASE("field specs validate eagerly") {
  CHECK(is_irreducible_gf2(0x13));
  CHECK_FALSE(is_irreducible_gf2(0x15));  // z^4 + z^2 + 1 = (z^2 + z + 1)^2
  CHECK_THROWS_AS(Field::get(FieldSpec::binary(4, 0x15)), UsageError);
  CHECK_THROWS_AS(Field::prime(128), UsageError);
  CHECK(&Field::binary(4) == &Field::get(FieldSpec::binary(4, 0x13)));
  for (unsigned m = 1; m <= 16; ++m) CHECK(is_irreducible_gf2(default_reduction_poly(m)));
}

TEST_CASE("field names") {
  CHECK(parse_field_name("gf16") == FieldSpec::binary(4));
  CHECK(parse_field_name("GF(2^4)") == FieldSpec::binary(4));
  CHECK(parse_field_name("gf127") == FieldSpec::prime(127));
  CHECK(parse_field_name("p7") == FieldSpec::prime(7));
  CHECK_THROWS_AS(parse_field_name("gf12"), UsageError);
}

TEST_CASE("field elements reject mixed fields") {
  const FieldElement a(Field::binary(4), 3), b(Field::binary(3), 3);
  CHECK_THROWS_AS(a + b, UsageError);
  CHECK((a * a.inv()).value() == 1);
  CHECK((a + a).is_zero());
}

TEST_CASE("symbol serialization") {
  const Field& f = Field::binary(4);
  CHECK(f.symbol_bytes() == 1);
  CHECK(f.payload_bits() == 4);
  const Field& g = Field::binary(16);
  std::uint8_t buf[2];
  g.write_symbol(0xABCD, buf);
  CHECK(buf[0] == 0xCD);
  CHECK(g.read_symbol(buf) == 0xABCD);
  const Field& p = Field::prime(65521);
  p.write_symbol(0x1234, buf);
  CHECK(buf[0] == 0x12);
  CHECK(p.read_symbol(buf) == 0x1234);
  CHECK(f.from_hex(f.to_hex(9)) == 9);
}
