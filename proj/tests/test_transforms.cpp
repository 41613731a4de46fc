#include <random>

#include "atrahasis/errors.hpp"
#include "atrahasis/star_search.hpp"
#include "atrahasis/subsets.hpp"
#include "atrahasis/transforms.hpp"
#include "doctest.h"

using namespace atrahasis;

namespace {

std::shared_ptr<const MsrCode> fixture() {
  static const auto code = std::make_shared<const MsrCode>(fixture_atrahasis_956());
  return code;
}

std::vector<Elem> random_symbols(const Field& f, std::size_t count, std::mt19937& rng) {
  std::vector<Elem> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(rng() % f.order());
  return v;
}

void check_shortened_roundtrips(const ShortenedCode& code, std::mt19937& rng, int files) {
  const auto& p = code.params();
  for (int it = 0; it < files; ++it) {
    const auto user = random_symbols(code.field(), p.M, rng);
    const FileTensor file = code.encode(user);
    REQUIRE(code.decode_user(file) == user);
    for (std::size_t h : code.pinned()) {
      CHECK(code.base().node_content(file, h).values == std::vector<Elem>(p.alpha, 0));
    }
    std::vector<NodeContent> contents;
    for (std::size_t i = 0; i < p.n; ++i) contents.push_back(code.node_content(file, i));

    for_each_subset(p.n, p.k, [&](const std::vector<std::size_t>& s) {
      std::vector<NodeContent> pick;
      for (std::size_t i : s) pick.push_back(contents[i]);
      CHECK(code.download(pick) == user);
      return true;
    });
    for (std::size_t f = 0; f < p.n; ++f) {
      std::vector<std::size_t> others;
      for (std::size_t h = 0; h < p.n; ++h) {
        if (h != f) others.push_back(h);
      }
      for_each_subset(others.size(), p.d, [&](const std::vector<std::size_t>& s) {
        std::vector<HelpMessage> msgs;
        for (std::size_t i : s) {
          msgs.push_back(code.help(contents[others[i]], f));
          REQUIRE(msgs.back().values.size() == p.beta);
        }
        CHECK(code.repair(f, msgs).values == contents[f].values);
        return true;
      });
    }
  }
}

}  // namespace

TEST_CASE("shortening the fixture once gives an (8,4,5,6) code") {
  const ShortenedCode code = shorten(fixture(), 1);
  const auto& p = code.params();
  CHECK(p.n == 8);
  CHECK(p.k == 4);
  CHECK(p.d == 5);
  CHECK(p.alpha == 6);
  CHECK(p.beta == 3);
  CHECK(p.M == 24);  // (k-1)α of the base
  CHECK(p.d - p.k + 1 == 2);
  CHECK(code.pinned() == std::vector<std::size_t>{8});
  std::mt19937 rng(11);
  check_shortened_roundtrips(code, rng, 2);
}

TEST_CASE("depth 0 is the identity") {
  const ShortenedCode code = shorten(fixture(), 0);
  CHECK(code.params() == fixture()->params());
  CHECK(code.generator() == Matrix::identity(code.field(), 30));
  std::mt19937 rng(3);
  const auto user = random_symbols(code.field(), 30, rng);
  CHECK(code.encode(user).coords == user);
}

TEST_CASE("double shortening matches depth-2 shortening") {
  const ShortenedCode once_twice = shorten(fixture(), 1).shorten(1);
  const ShortenedCode direct = shorten(fixture(), 2);
  CHECK(once_twice.pinned() == direct.pinned());
  CHECK(once_twice.params() == direct.params());
  CHECK(direct.params().n == 7);
  CHECK(direct.params().k == 3);
  CHECK(direct.params().d == 4);
  CHECK(once_twice.generator() == direct.generator());
  for (std::size_t i = 0; i < 7; ++i) CHECK(once_twice.node_encoder(i) == direct.node_encoder(i));
  std::mt19937 rng(5);
  check_shortened_roundtrips(direct, rng, 1);
}

TEST_CASE("plan matrices agree with the operational path") {
  const ShortenedCode code = shorten(fixture(), 1);
  const Field& f = code.field();
  std::mt19937 rng(8);
  const auto user = random_symbols(f, 24, rng);
  const FileTensor file = code.encode(user);
  for (std::size_t i = 0; i < 8; ++i) CHECK(code.node_encoder(i).apply(user) == code.node_content(file, i).values);

  const std::vector<std::size_t> nodes{1, 3, 6, 7};
  std::vector<Elem> stacked;
  for (std::size_t i : nodes) {
    const auto v = code.node_content(file, i).values;
    stacked.insert(stacked.end(), v.begin(), v.end());
  }
  CHECK(code.download_decoder(nodes).apply(stacked) == user);

  const std::vector<std::size_t> helpers{0, 1, 3, 5, 7};
  std::vector<Elem> received;
  for (std::size_t h : helpers) {
    const auto m = code.help_encoder(h, 2).apply(code.node_content(file, h).values);
    received.insert(received.end(), m.begin(), m.end());
  }
  CHECK(code.repair_combiner(2, helpers).apply(received) == code.node_content(file, 2).values);
}

TEST_CASE("shortening errors") {
  CHECK_THROWS_AS(shorten(fixture(), 5), UsageError);
  CHECK_THROWS_AS(ShortenedCode(fixture(), {3, 3}), UsageError);
  CHECK_THROWS_AS(ShortenedCode(fixture(), {9}), UsageError);
  const ShortenedCode code = shorten(fixture(), 1);
  std::mt19937 rng(1);
  const FileTensor file = code.encode(random_symbols(code.field(), 24, rng));
  std::vector<NodeContent> three;
  for (std::size_t i = 0; i < 3; ++i) three.push_back(code.node_content(file, i));
  CHECK_THROWS_AS(code.download(three), InsufficientNodes);

  // Two nodes with identical stars: pinning both leaves a dependent constraint system.
  StarFamily bad = fixture_atrahasis_956();
  bad.x_stars[8] = bad.x_stars[7];
  bad.second_stars[8] = bad.second_stars[7];
  CHECK_THROWS_AS(shorten(std::make_shared<const MsrCode>(bad), 2), AxiomViolation);
}

TEST_CASE("two-failure closed forms") {
  // k = 5, d = 6: 6·5, 5·5 + 3, 3·9.
  CHECK(naive_two_bandwidth(5, 6) == 30);
  CHECK(cascade_two_bandwidth(5, 6) == 28);
  CHECK(subspace_two_bandwidth(5) == 27);
  for (std::size_t r = 2; r <= 20; ++r) {
    const std::size_t k = 2 * r + 1, d = 3 * r, alpha = binomial(k - 1, 2);
    CHECK(subspace_two_bandwidth(k) <= cascade_two_bandwidth(k, d));
    CHECK(cascade_two_bandwidth(k, d) <= naive_two_bandwidth(k, d));
    // 3(k-2)^2 - 2dα/(d+2-k) = 3k - 18 + 18/(r+1), compared after scaling by (r+1).
    const auto [num, den] = two_failure_cut_set(k, d, alpha);
    REQUIRE(den == r + 1);
    CHECK(subspace_two_bandwidth(k) * den - num == (3 * k - 18) * (r + 1) + 18);
  }
  const auto [num, den] = two_failure_cut_set(5, 6, 6);
  CHECK(num == 72);
  CHECK(den == 3);
}

TEST_CASE("two-failure repair on the fixture, every pair") {
  const MsrCode& code = *fixture();
  std::mt19937 rng(21);
  const FileTensor file{random_symbols(code.field(), 30, rng)};
  const FileTensor zero{std::vector<Elem>(30, 0)};
  const std::pair<TwoRepairStrategy, std::size_t> expect[] = {
      {TwoRepairStrategy::Naive, 30}, {TwoRepairStrategy::Cascade, 28}, {TwoRepairStrategy::Subspace, 27}};
  for_each_subset(9, 2, [&](const std::vector<std::size_t>& fg) {
    std::vector<NodeContent> helpers;
    for (std::size_t h = 0; h < 9 && helpers.size() < 6; ++h) {
      if (h != fg[0] && h != fg[1]) helpers.push_back(code.node_content(file, h));
    }
    for (const auto& [strategy, bw] : expect) {
      const auto res = central_repair_two(code, fg[0], fg[1], helpers, strategy);
      CHECK(res.bandwidth == bw);
      CHECK(res.f.values == code.node_content(file, fg[0]).values);
      CHECK(res.g.values == code.node_content(file, fg[1]).values);
    }
    return true;
  });

  std::vector<NodeContent> zero_helpers;
  for (std::size_t h = 2; h < 8; ++h) zero_helpers.push_back(code.node_content(zero, h));
  const auto res = central_repair_two(code, 0, 1, zero_helpers, TwoRepairStrategy::Subspace);
  CHECK(res.bandwidth == 27);
  CHECK(res.f.values == std::vector<Elem>(6, 0));
}

TEST_CASE("two-failure helper order changes the split, not the total") {
  const MsrCode& code = *fixture();
  const auto a = plan_central_repair_two(code, 0, 1, {2, 3, 4, 5, 6, 7}, TwoRepairStrategy::Subspace);
  const auto b = plan_central_repair_two(code, 0, 1, {8, 7, 6, 5, 4, 3}, TwoRepairStrategy::Subspace);
  CHECK(a.total_bandwidth == 27);
  CHECK(b.total_bandwidth == 27);
  CHECK(a.encoders[0].rows() == 5);
  std::size_t sum = 0;
  for (const auto& e : a.encoders) sum += e.rows();
  CHECK(sum == 27);
}

TEST_CASE("two-failure errors") {
  const MsrCode& code = *fixture();
  CHECK_THROWS_AS(plan_central_repair_two(code, 1, 1, {2, 3, 4, 5, 6, 7}, TwoRepairStrategy::Naive), UsageError);
  CHECK_THROWS_AS(plan_central_repair_two(code, 0, 1, {1, 3, 4, 5, 6, 7}, TwoRepairStrategy::Naive), UsageError);
  CHECK_THROWS_AS(plan_central_repair_two(code, 0, 1, {2, 2, 4, 5, 6, 7}, TwoRepairStrategy::Naive), UsageError);
  CHECK_THROWS_AS(plan_central_repair_two(code, 0, 1, {2, 3, 4, 5, 6}, TwoRepairStrategy::Naive),
                  InsufficientNodes);
  const MsrCode t2(rs_stars_t2(Field::binary(4), 6, 3, Flavor::Symmetric));
  CHECK_THROWS_AS(plan_central_repair_two(t2, 0, 1, {2, 3, 4, 5}, TwoRepairStrategy::Naive), UsageError);
  CHECK(parse_two_repair_strategy("cascade") == TwoRepairStrategy::Cascade);
  CHECK_THROWS_AS(parse_two_repair_strategy("greedy"), UsageError);
}
