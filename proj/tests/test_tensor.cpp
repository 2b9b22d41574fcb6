#include <cmath>
#include <random>
#include <stdexcept>

#include "clisr/rng.hpp"
#include "clisr/tensor.hpp"
#include "doctest.h"

using namespace clisr;

TEST_CASE("tensor construction and accessors") {
  Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK(t.size() == 6);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.at(1, 2) == 6.0);
  auto bad_shape = [] { return Tensor({2, 2}, {1, 2, 3}); };
  CHECK_THROWS_AS(bad_shape(), std::invalid_argument);
  auto bad_item = [] { return Tensor::vec({1, 2}).item(); };
  CHECK_THROWS_AS(bad_item(), std::invalid_argument);
  CHECK(Tensor::scalar(3.5).item() == 3.5);
  CHECK(Tensor{}.empty());
}

TEST_CASE("cosine similarity examples") {
  CHECK(cosine_similarity(Tensor::vec({1, 0}), Tensor::vec({1, 0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity(Tensor::vec({1, 0}), Tensor::vec({0, 1})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // 32 / (sqrt(14) * sqrt(77))
  const double expected = 32.0 / (std::sqrt(14.0) * std::sqrt(77.0));
  CHECK(cosine_similarity(Tensor::vec({1, 2, 3}), Tensor::vec({4, 5, 6})) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(expected - 0.974631846) < 1e-9);
}

TEST_CASE("cosine similarity guards") {
  CHECK_THROWS_AS(cosine_similarity(Tensor::vec({1, 2}), Tensor::vec({1, 2, 3})),
                  std::invalid_argument);
  CHECK_THROWS_AS(cosine_similarity(Tensor{}, Tensor{}), std::invalid_argument);
  CHECK(cosine_similarity(Tensor::vec({0, 0}), Tensor::vec({0, 0})) == 0.0);
}

TEST_CASE("cosine similarity is symmetric and scale invariant") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 1 + uniform_index(rng, 8);
    std::vector<double> av(n), bv(n);
    for (auto& x : av) x = uniform_real(rng, -1, 1);
    for (auto& x : bv) x = uniform_real(rng, -1, 1);
    // normalize to norm >= 1: the 1e-12 denominator guard otherwise shifts
    // sim(ka, b) by ~eps*|k-1|/(k*|a||b|), which is what the bound tolerates
    auto unitize = [&](std::vector<double>& v) {
      double nrm = 0;
      for (double x : v) nrm += x * x;
      nrm = std::sqrt(nrm);
      const double target = uniform_real(rng, 1.0, 2.0);
      for (auto& x : v) x = nrm > 0 ? x / nrm * target : 1.0;
    };
    unitize(av);
    unitize(bv);
    Tensor a = Tensor::vec(av), b = Tensor::vec(bv);
    const double s = cosine_similarity(a, b);
    CHECK(std::abs(s - cosine_similarity(b, a)) < 1e-12);
    const double k = uniform_real(rng, 0.5, 2.0);
    std::vector<double> ak(n);
    for (std::size_t i = 0; i < n; ++i) ak[i] = k * av[i];
    CHECK(std::abs(s - cosine_similarity(Tensor::vec(ak), b)) < 1e-12);
    CHECK(s >= -1.0 - 1e-9);
    CHECK(s <= 1.0 + 1e-9);
  }
}

TEST_CASE("softmax examples") {
  Tensor u = softmax(Tensor::vec({0, 0, 0}));
  for (std::size_t i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  Tensor lh = softmax(Tensor::vec({std::log(2.0), 0.0}));
  CHECK(lh[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(lh[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  Tensor m = softmax(Tensor::vec({5, 5}), {1, 0});
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 0.0);
}

TEST_CASE("softmax guards and stability") {
  const Tensor two = Tensor::vec({1, 2});
  const std::vector<std::uint8_t> none = {0, 0};
  const std::vector<std::uint8_t> short_mask = {1};
  CHECK_THROWS_WITH_AS(softmax(two, none), "softmax: empty attention support",
                       std::invalid_argument);
  CHECK_THROWS_AS(softmax(Tensor{}), std::invalid_argument);
  CHECK_THROWS_AS(softmax(two, short_mask), std::invalid_argument);
  // huge scores must not overflow
  Tensor big = softmax(Tensor::vec({1000.0, 999.0}));
  CHECK(big.all_finite());
  CHECK(big[0] > big[1]);
}

TEST_CASE("softmax outputs a probability simplex over unmasked entries") {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 1000; ++it) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    std::vector<double> s(n);
    for (auto& x : s) x = uniform_real(rng, -30, 30);
    std::vector<std::uint8_t> mask(n);
    std::size_t live = 0;
    for (auto& m : mask) {
      m = u01(rng) < 0.7 ? 1 : 0;
      live += m;
    }
    if (live == 0) mask[uniform_index(rng, n)] = 1;
    Tensor y = softmax(Tensor::vec(s), mask);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y[i] >= 0.0);
      if (!mask[i]) CHECK(y[i] == 0.0);
      total += y[i];
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}
