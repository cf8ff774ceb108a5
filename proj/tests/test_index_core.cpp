#include <doctest.h>

#include <random>

#include "hamsplit/index_core.hpp"
#include "hamsplit/models.hpp"
#include "helpers.hpp"

using namespace hamsplit;

TEST_CASE("box, shifted box and sparse sets") {
  const auto box = build_index_set(IndexSetKind::box, 2, 1);
  REQUIRE(box.size() == 5);
  for (int a = -2; a <= 2; ++a) CHECK(box.mode(static_cast<std::size_t>(a + 2)) == Point{a});

  const auto shifted = build_index_set(IndexSetKind::shifted_box, 2, 1);
  REQUIRE(shifted.size() == 4);
  CHECK(shifted.mode(0) == Point{-2});
  CHECK(shifted.mode(3) == Point{1});

  const auto sparse = build_index_set(IndexSetKind::sparse, 2, 2);
  REQUIRE(sparse.size() == 5);
  const std::vector<Point> expected{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}};
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(sparse.mode(k) == expected[k]);

  const auto nonneg = build_index_set(IndexSetKind::nonnegative_box, 3, 1);
  REQUIRE(nonneg.size() == 4);
  CHECK(nonneg.mode(0) == Point{0});
}

TEST_CASE("sparse set contains exactly the hyperbolic cross") {
  const int K = 6;
  const auto sparse = build_index_set(IndexSetKind::sparse, K, 2);
  for (int a = -K; a <= K; ++a) {
    for (int b = -K; b <= K; ++b) {
      const bool inside = (1 + std::abs(a)) * (1 + std::abs(b)) <= K;
      CHECK(sparse.find(Point{a, b}).has_value() == inside);
    }
  }
}

TEST_CASE("set sizes and ordering") {
  for (int d = 1; d <= 3; ++d) {
    int box = 1, shifted = 1;
    for (int i = 0; i < d; ++i) {
      box *= 5;
      shifted *= 4;
    }
    const auto b = build_index_set(IndexSetKind::box, 2, d);
    const auto s = build_index_set(IndexSetKind::shifted_box, 2, d);
    CHECK(b.size() == static_cast<std::size_t>(box));
    CHECK(s.size() == static_cast<std::size_t>(shifted));
    CHECK(std::is_sorted(b.modes().begin(), b.modes().end()));
    for (const auto& a : b.modes()) CHECK(sup_norm(a) <= 2);
  }
}

TEST_CASE("invalid cutoffs are rejected") {
  CHECK_THROWS_AS(build_index_set(IndexSetKind::box, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_index_set(IndexSetKind::box, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_index_set(IndexSetKind::box, 2, 1).position(Point{3}), std::invalid_argument);
}

TEST_CASE("omega_of on NLS frequencies") {
  const auto m = nls_model(4, testing_support::rational_potential(), {});
  const auto& s = m->index_set();
  const std::size_t p1 = s.position(1), p2 = s.position(2);
  CHECK(omega_of(MultiIndex{{p1, 1}, {p1, -1}}, m->omega()) == 0.0);
  CHECK(omega_of(MultiIndex{{p2, 1}, {p1, -1}}, m->omega()) == doctest::Approx(2.9444444444444444).epsilon(1e-14));
  CHECK(omega_of(MultiIndex{{p1, 1}, {p1, 1}}, m->omega()) == doctest::Approx(2.3333333333333333).epsilon(1e-14));
  CHECK_THROWS_AS(omega_of(MultiIndex{{99, 1}}, m->omega()), std::invalid_argument);
}

TEST_CASE("conjugation, antisymmetry and action classes on random multi-indices") {
  const auto m = nls_model(3, testing_support::rational_potential(), {});
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> mode(0, m->index_set().size() - 1);
  std::uniform_int_distribution<int> sign(0, 1), len(1, 6);
  for (int t = 0; t < 500; ++t) {
    std::vector<SignedIndex> e;
    const int r = len(rng);
    for (int i = 0; i < r; ++i) e.push_back({mode(rng), sign(rng) ? 1 : -1});
    const MultiIndex j(e);
    CHECK(j.conjugate().conjugate() == j);
    CHECK(omega_of(j.conjugate(), m->omega()) == doctest::Approx(-omega_of(j, m->omega())));
    if (is_action_class(j)) CHECK(omega_of(j, m->omega()) == 0.0);
    std::reverse(e.begin(), e.end());
    CHECK(MultiIndex(e) == j);
  }
}

TEST_CASE("is_action_class") {
  for (std::size_t a = 0; a < 4; ++a) CHECK(is_action_class(MultiIndex{{a, 1}, {a, -1}}));
  CHECK_FALSE(is_action_class(MultiIndex{{1, 1}, {1, -1}, {2, 1}}));
  CHECK_FALSE(is_action_class(MultiIndex{{1, 1}}));
  CHECK_FALSE(is_action_class(MultiIndex{{1, 1}, {2, -1}}));
  CHECK(is_action_class(MultiIndex{{1, 1}, {2, -1}, {2, 1}, {1, -1}}));
  CHECK_FALSE(is_action_class(MultiIndex{{1, 1}, {1, 1}, {1, -1}, {2, -1}}));
  CHECK_THROWS_AS(MultiIndex({{1, 0}}), std::invalid_argument);
}

TEST_CASE("multi-index helpers") {
  const MultiIndex j{{2, 1}, {1, -1}, {2, 1}};
  CHECK(j.count({2, 1}) == 2);
  CHECK(j.without({2, 1}) == MultiIndex{{1, -1}, {2, 1}});
  CHECK(j.merged(MultiIndex{{0, 1}}) == MultiIndex{{0, 1}, {1, -1}, {2, 1}, {2, 1}});
  const auto s = build_index_set(IndexSetKind::shifted_box, 2, 1);
  CHECK(MultiIndex{{3, 1}, {0, -1}}.to_string(s) == "(-2,-)(1,+)");
}
