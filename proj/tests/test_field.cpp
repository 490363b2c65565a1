#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "eia/field.hpp"
#include "eia/field_matrix.hpp"
#include "eia/rng.hpp"

using namespace eia;

TEST_CASE("field element arithmetic examples", "[field]") {
  CHECK(add(FieldElement{3, 5}, FieldElement{4, 5}).value == 2);
  CHECK(add(FieldElement{0, 5}, FieldElement{2, 5}).value == 2);
  CHECK(add(FieldElement{6, 7}, FieldElement{1, 7}).value == 0);
  CHECK(neg(FieldElement{3, 5}).value == 2);
  CHECK(inv(FieldElement{3, 5}).value == 2);
  CHECK(mul(FieldElement{3, 7}, FieldElement{5, 7}).value == 1);
}

TEST_CASE("field element error paths", "[field]") {
  CHECK_THROWS_AS(inv(FieldElement{0, 5}), std::domain_error);
  CHECK_THROWS_AS(add(FieldElement{1, 5}, FieldElement{1, 7}), std::invalid_argument);
  CHECK_THROWS_AS(FieldElement(5, 5), std::invalid_argument);
  CHECK_THROWS_AS(FieldElement(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(FieldElement(1, 9), std::invalid_argument);
  CHECK(is_odd_prime(3));
  CHECK(is_odd_prime(13));
  CHECK_FALSE(is_odd_prime(2));
  CHECK_FALSE(is_odd_prime(1));
  CHECK_FALSE(is_odd_prime(15));
}

TEST_CASE("field axioms hold exhaustively for q <= 13", "[field]") {
  for (std::uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
    for (std::uint32_t a = 0; a < q; ++a) {
      if (a != 0) {
        CHECK(gf_mul(a, gf_inv(a, q), q) == 1);
      }
      CHECK(gf_add(a, gf_neg(a, q), q) == 0);
      for (std::uint32_t b = 0; b < q; ++b) {
        CHECK(gf_add(a, b, q) == gf_add(b, a, q));
        CHECK(gf_mul(a, b, q) == gf_mul(b, a, q));
        for (std::uint32_t c = 0; c < q; ++c) {
          CHECK(gf_add(gf_add(a, b, q), c, q) == gf_add(a, gf_add(b, c, q), q));
          CHECK(gf_mul(gf_mul(a, b, q), c, q) == gf_mul(a, gf_mul(b, c, q), q));
          CHECK(gf_mul(a, gf_add(b, c, q), q) == gf_add(gf_mul(a, b, q), gf_mul(a, c, q), q));
        }
      }
    }
  }
}

TEST_CASE("diagonal pairing sigma", "[field]") {
  CHECK(gf_diagonal_pair(3, 5) == 3);  // 1 - 3 = -2 = 3 mod 5
  CHECK(gf_diagonal_pair(1, 5) == 1);
  CHECK(gf_diagonal_pair(4, 7) == 4);  // 1 - 4 = -3 = 4 mod 7
  CHECK_THROWS_AS(gf_diagonal_pair(0, 5), std::domain_error);

  for (std::uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
    std::set<std::uint32_t> image;
    for (std::uint32_t a = 1; a < q; ++a) {
      const std::uint32_t s = gf_diagonal_pair(a, q);
      CHECK(s != 0);
      image.insert(s);
      const std::uint32_t sum = gf_add(a, s, q);
      CHECK((sum == 1 || sum == 2));
      CHECK(gf_diagonal_pair(s, q) == a);  // involution
    }
    CHECK(image.size() == q - 1);  // permutation of the nonzero alphabet
  }
}

namespace {

FieldMatrix matrix_from_index(std::uint64_t idx, std::uint32_t dim, std::uint32_t q) {
  FieldMatrix m(dim, q);
  for (std::uint32_t i = 0; i < dim; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) {
      m.set(i, j, 1 + std::uint32_t(idx % (q - 1)));
      idx /= (q - 1);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("complement matrix worked example", "[field]") {
  auto h = FieldMatrix::from_rows({{2, 3}, {4, 1}}, 5);
  auto g = complement_matrix(h);
  CHECK(g == FieldMatrix::from_rows({{4, 2}, {1, 1}}, 5));
  auto s = add(h, g);
  CHECK(s == FieldMatrix::from_rows({{1, 0}, {0, 2}}, 5));
  CHECK(complement_matrix(g) == h);
}

TEST_CASE("complement matrix rejects zero entries", "[field]") {
  auto h = FieldMatrix::from_rows({{2, 0}, {4, 1}}, 5);
  CHECK_THROWS_AS(complement_matrix(h), std::invalid_argument);
}

TEST_CASE("complement map is an alphabet-preserving involution", "[field]") {
  // Exhaustive over all valid matrices for q=3 and q=5, K=2.
  for (std::uint32_t q : {3u, 5u}) {
    const std::uint32_t dim = 2;
    std::uint64_t total = 1;
    for (std::uint32_t e = 0; e < dim * dim; ++e) total *= (q - 1);

    std::set<std::string> image;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      const FieldMatrix h = matrix_from_index(idx, dim, q);
      const FieldMatrix g = complement_matrix(h);
      CHECK(g.channel_valid());
      CHECK_FALSE(g == h);  // no fixed points for K >= 2
      CHECK(complement_matrix(g) == h);
      const FieldMatrix s = add(h, g);
      for (std::uint32_t i = 0; i < dim; ++i) {
        for (std::uint32_t j = 0; j < dim; ++j) {
          if (i == j) {
            CHECK((s.at(i, j) == 1 || s.at(i, j) == 2));
          } else {
            CHECK(s.at(i, j) == 0);
          }
        }
      }
      image.insert(g.key());
    }
    CHECK(image.size() == total);  // bijection
  }
}

TEST_CASE("field matrix json round trip", "[field]") {
  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const std::uint32_t q = (rep % 2) ? 5 : 7;
    FieldMatrix m(3, q);
    for (std::uint32_t i = 0; i < 3; ++i) {
      for (std::uint32_t j = 0; j < 3; ++j) m.set(i, j, std::uint32_t(rng.below(q)));
    }
    CHECK(FieldMatrix::from_json(m.to_json()) == m);
  }
  auto j = FieldMatrix::from_rows({{2, 3}, {4, 1}}, 5).to_json();
  CHECK(j["modulus"] == 5);
  CHECK(j["entries"][1][0] == 4);
}
