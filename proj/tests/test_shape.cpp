#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace roofcoh;

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(SubsystemShape({}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemShape({2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemShape({0}), std::invalid_argument);
  const SubsystemShape s({2, 3, 2});
  CHECK(s.num_parties() == 3);
  CHECK(s.total_dim() == 12);
  CHECK(s.to_string() == "2x3x2");
}

TEST_CASE("flat and multi index are inverse bijections") {
  const SubsystemShape s({2, 3, 2});
  std::vector<bool> hit(12, false);
  for (int flat = 0; flat < 12; ++flat) {
    const auto multi = s.multi_index(flat);
    CHECK(s.flat_index(multi) == flat);
    hit[static_cast<std::size_t>(flat)] = true;
  }
  for (bool h : hit) CHECK(h);
  // row-major, party 0 slowest
  CHECK(s.flat_index({1, 0, 0}) == 6);
  CHECK(s.flat_index({0, 1, 0}) == 2);
  CHECK(s.flat_index({0, 0, 1}) == 1);
  CHECK_THROWS_AS(s.flat_index({0, 3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(s.multi_index(12), std::invalid_argument);
}

TEST_CASE("restriction and concatenation") {
  const SubsystemShape s({2, 3, 2});
  CHECK(s.restricted_to({0, 2}) == SubsystemShape({2, 2}));
  CHECK(s.restricted_to({1}) == SubsystemShape({3}));
  CHECK_THROWS_AS(s.restricted_to({2, 0}), std::invalid_argument);
  CHECK(SubsystemShape({2}).concatenated_with(SubsystemShape({3, 2})) == s);
}

TEST_CASE("party split covers every flat index exactly once") {
  const SubsystemShape s({2, 3, 2});
  for (int party = 0; party < 3; ++party) {
    const PartySplit split(s, party);
    CHECK(split.party_dim() * split.comp_dim() == s.total_dim());
    std::vector<int> seen(12, 0);
    for (int i = 0; i < split.party_dim(); ++i) {
      for (int m = 0; m < split.comp_dim(); ++m) {
        ++seen[static_cast<std::size_t>(split.flat(i, m))];
        // the full multi-index agrees with the (party, complement) pieces
        const auto multi = s.multi_index(split.flat(i, m));
        CHECK(multi[static_cast<std::size_t>(party)] == i);
        const auto comp = split.comp_multi(m);
        std::vector<int> rest;
        for (int j = 0; j < 3; ++j) {
          if (j != party) rest.push_back(multi[static_cast<std::size_t>(j)]);
        }
        CHECK(rest == comp);
      }
    }
    for (int count : seen) CHECK(count == 1);
  }
  CHECK_THROWS_AS(PartySplit(s, 3), std::invalid_argument);
}
