#include <doctest.h>

#include <stdexcept>

#include "mqst/sector_basis.hpp"

using mqst::enumerate_basis;
using mqst::SiteSet;

TEST_SUITE("sector_basis") {

TEST_CASE("single excitation on two sites") {
  const auto b = enumerate_basis(2, 1);
  REQUIRE(b.size() == 2);
  CHECK(b.config(0) == SiteSet{1});
  CHECK(b.config(1) == SiteSet{2});
  CHECK(index_of(b, {1}) == 0);
}

TEST_CASE("two excitations on four sites are lexicographic") {
  const auto b = enumerate_basis(4, 2);
  REQUIRE(b.size() == 6);
  CHECK(b.config(0) == SiteSet{1, 2});
  CHECK(b.config(5) == SiteSet{3, 4});
  CHECK(index_of(b, {1, 2}) == 0);
  CHECK(index_of(b, {3, 4}) == 5);
  CHECK(index_of(b, {4, 3}) == 5);
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b.config(i - 1) < b.config(i));
}

TEST_CASE("ten-site pair sector") { CHECK(enumerate_basis(10, 2).size() == 45); }

TEST_CASE("vacuum sector holds the empty configuration") {
  const auto b = enumerate_basis(5, 0);
  REQUIRE(b.size() == 1);
  CHECK(b.config(0).empty());
  CHECK(b.mask(0) == 0);
}

TEST_CASE("sector sizes and round trip for N = 2..12") {
  for (int n = 2; n <= 12; ++n) {
    const std::size_t expected[3] = {1, std::size_t(n), std::size_t(n * (n - 1) / 2)};
    for (int k = 0; k <= 2; ++k) {
      const auto b = enumerate_basis(n, k);
      CHECK(b.size() == expected[k]);
      for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& c = b.config(i);
        CHECK(c.size() == std::size_t(k));
        for (int s : c) CHECK((s >= 1 && s <= n));
        CHECK(b.index_of(c) == i);
        CHECK(b.index_of_mask(b.mask(i)) == i);
      }
    }
  }
}

TEST_CASE("invalid sectors are rejected") {
  CHECK_THROWS_AS(enumerate_basis(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_basis(4, 3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_basis(2, -1), std::invalid_argument);
}

TEST_CASE("unknown configurations fail lookup") {
  const auto b = enumerate_basis(4, 2);
  CHECK_THROWS_AS(b.index_of({1}), std::out_of_range);
  CHECK_THROWS_AS(b.index_of({1, 5}), std::out_of_range);
  CHECK_THROWS_AS(b.index_of({2, 2}), std::out_of_range);
  CHECK_THROWS_AS(b.index_of({0, 1}), std::out_of_range);
}

}
