#include <sstream>

#include "atrahasis/star_search.hpp"
#include "doctest.h"

using namespace atrahasis;

TEST_CASE("fixture family") {
  const auto s = fixture_atrahasis_956();
  const Field& f = *s.field;
  CHECK(f.spec().reduction_poly == 0x13);
  // z^-1 = z^3 + 1, z^-3 = z^12 = z^3 + z^2 + z + 1.
  CHECK(s.points == std::vector<Elem>{0, 0x8, 0xC, 0xF, 0xA, 0x9, 0xD, 0xE, 0xB});
  CHECK(s.x_stars[0] == std::vector<Elem>{1, 0, 0});
  CHECK(s.second_stars[1] == std::vector<Elem>{1, 0x8, f.pow(0x8, 3)});
  CHECK(verify_axioms(s).pass);
}

TEST_CASE("grow_pool on the fixture parameters") {
  SearchConfig cfg;
  cfg.field = &Field::binary(4);
  cfg.k = 5;
  cfg.d = 6;
  cfg.x_pattern = {0, 2, 6};
  cfg.second_pattern = {0, 1, 3};
  const auto res = grow_pool(cfg);
  REQUIRE(res.found);
  CHECK(res.points.size() >= 9);
  CHECK(verify_axioms(*res.family).pass);
  // Determinism.
  CHECK(grow_pool(cfg).points == res.points);
  cfg.max_pool = 9;
  const auto capped = grow_pool(cfg);
  CHECK(capped.points.size() == 9);
  CHECK(capped.family->params.n == 9);
}

TEST_CASE("grow_pool with Reed-Solomon patterns at t = 2") {
  SearchConfig cfg;
  cfg.field = &Field::binary(5);
  cfg.k = 4;
  cfg.d = 6;
  cfg.max_pool = 12;
  for (Flavor fl : {Flavor::Symmetric, Flavor::Exterior}) {
    cfg.flavor = fl;
    const auto res = grow_pool(cfg);
    REQUIRE(res.found);
    // x^3 is a bijection on GF(32), so the first 12 elements all qualify.
    CHECK(res.points == std::vector<Elem>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(verify_axioms(*res.family).pass);
  }
}

TEST_CASE("grow_pool fails over GF(2)") {
  SearchConfig cfg;
  cfg.field = &Field::binary(1);
  cfg.k = 3;
  cfg.d = 4;
  const auto res = grow_pool(cfg);
  CHECK_FALSE(res.found);
  CHECK(res.diagnostic.find("search failed") != std::string::npos);
}

TEST_CASE("witness on (5,6,3)") {
  const Field& f = Field::prime(127);
  const auto r = nullstellensatz_witness(5, 6, Flavor::Symmetric, f, 1, 10);
  CHECK(r.matrix_rows == 18);
  CHECK(r.matrix_cols == 18);
  CHECK(r.verdict == Verdict::NonzeroWitnessed);
  CHECK(r.determinant != 0);
  CHECK(replay_witness(r, f));
  const auto again = nullstellensatz_witness(5, 6, Flavor::Symmetric, f, 1, 10);
  CHECK(again.x_point == r.x_point);
  CHECK(again.determinant == r.determinant);
  const auto other = nullstellensatz_witness(5, 6, Flavor::Symmetric, f, 2, 10);
  CHECK(other.x_point != r.x_point);

  const auto tiny = nullstellensatz_witness(2, 2, Flavor::Symmetric, f, 3, 10);
  CHECK(tiny.matrix_rows == 2);
  CHECK(tiny.verdict == Verdict::NonzeroWitnessed);

  const auto ext = nullstellensatz_witness(5, 6, Flavor::Exterior, f, 1, 10);
  CHECK(ext.verdict == Verdict::NonzeroWitnessed);
  CHECK(replay_witness(ext, f));
  CHECK_THROWS_AS(nullstellensatz_witness(5, 6, Flavor::Symmetric, Field::binary(4), 1, 10), UsageError);
}

TEST_CASE("zero redraws over a tiny field can be inconclusive") {
  // Over GF(2) a random 18 x 18 evaluation is singular with probability > 1/2.
  const Field& f = Field::prime(2);
  bool saw_inconclusive = false;
  for (std::uint64_t seed = 0; seed < 20 && !saw_inconclusive; ++seed) {
    const auto r = nullstellensatz_witness(5, 6, Flavor::Symmetric, f, seed, 0);
    if (r.verdict == Verdict::Inconclusive) {
      saw_inconclusive = true;
      CHECK(r.redraws == 1);
      CHECK_FALSE(replay_witness(r, f));
    }
  }
  CHECK(saw_inconclusive);
}

TEST_CASE("sweep cases") {
  const auto one = sweep_cases(1, 6);
  REQUIRE(!one.empty());
  for (const auto& c : one) {
    CHECK(c.t == c.k);
    CHECK(c.d == c.k);
    CHECK(c.alpha == 1);
  }
  const auto ten = sweep_cases(10, 11);
  CHECK(std::any_of(ten.begin(), ten.end(), [](const SweepCase& c) { return c.k == 5 && c.d == 6 && c.t == 3; }));
  for (const auto& c : ten) {
    CHECK(c.d % (c.d - c.k + 1) == 0);
    CHECK(c.alpha == binomial(c.k - 1, c.t - 1));
  }
  const auto reports = sweep_small_cases(10, Field::prime(127), 7);
  CHECK(reports.size() == ten.size());
  for (const auto& r : reports) CHECK(r.verdict == Verdict::NonzeroWitnessed);
  std::ostringstream os;
  write_sweep_tsv(os, reports);
  CHECK(os.str().rfind("k\td\tt\talpha\tfield\tredraws\tverdict\n", 0) == 0);
}
