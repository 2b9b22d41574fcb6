#include <cmath>
#include <random>

#include "clisr/graph.hpp"
#include "clisr/rng.hpp"
#include "clisr/tensor.hpp"
#include "doctest.h"

using namespace clisr;

namespace {

Tensor random_tensor(std::mt19937_64& rng, std::vector<std::size_t> shape) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = uniform_real(rng, -1, 1);
  return t;
}

// Finite-difference check of an arbitrary scalar-valued graph expression
// built on top of two params.
void check_grads(const std::function<Var(Graph&, Param&, Param&)>& build, Param& a,
                 Param& b, double tol = 1e-6) {
  a.zero_grad();
  b.zero_grad();
  {
    Graph g;
    g.backward(build(g, a, b));
  }
  auto loss = [&]() {
    Graph g;
    return g.value(build(g, a, b)).item();
  };
  const Tensor fa = finite_diff_gradient(loss, a);
  const Tensor fb = finite_diff_gradient(loss, b);
  CHECK(max_relative_error(a.grad, fa) < tol);
  CHECK(max_relative_error(b.grad, fb) < tol);
}

}  // namespace

TEST_CASE("backward on sum gives all-ones gradient") {
  Param p("p", Group::Theta, Tensor::vec({1, -2, 3, 0.5}));
  Graph g;
  g.backward(g.sum(g.param(p)));
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.grad[i] == 1.0);
}

TEST_CASE("backward on squared norm gives 2p") {
  Param p("p", Group::Theta, Tensor::vec({1.5, -0.25, 2}));
  Graph g;
  Var x = g.param(p);
  g.backward(g.dot(x, x));
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p.grad[i] == doctest::Approx(2 * p.value[i]).epsilon(1e-12));
  }
}

TEST_CASE("backward requires a scalar root") {
  Param p("p", Group::Theta, Tensor::vec({1, 2}));
  Graph g;
  Var x = g.param(p);
  CHECK_THROWS_AS(g.backward(x), std::invalid_argument);
}

TEST_CASE("backward is linear: grad of sum equals sum of grads") {
  std::mt19937_64 rng(3);
  Param p("p", Group::Theta, random_tensor(rng, {6}));

  auto loss_a = [&](Graph& g) {
    Var x = g.param(p);
    return g.sum(g.tanh(x));
  };
  auto loss_b = [&](Graph& g) {
    Var x = g.param(p);
    return g.dot(x, x);
  };

  p.zero_grad();
  {
    Graph g;
    g.backward(g.add(loss_a(g), loss_b(g)));
  }
  Tensor combined = p.grad;

  p.zero_grad();
  {
    Graph g;
    g.backward(loss_a(g));
  }
  {
    Graph g;
    g.backward(loss_b(g));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p.grad[i] == doctest::Approx(combined[i]).epsilon(1e-12));
  }
}

TEST_CASE("grads accumulate across backward passes until zeroed") {
  Param p("p", Group::Theta, Tensor::vec({2, 3}));
  for (int k = 0; k < 3; ++k) {
    Graph g;
    g.backward(g.sum(g.param(p)));
  }
  CHECK(p.grad[0] == 3.0);
  p.zero_grad();
  CHECK(p.grad[0] == 0.0);
}

TEST_CASE("unused parameters keep exactly-zero grads") {
  Param used("used", Group::Theta, Tensor::vec({1, 2}));
  Param unused("unused", Group::Phi, Tensor::vec({3, 4}));
  Graph g;
  Var a = g.param(used);
  Var b = g.param(unused);  // on the tape but not reachable from the root
  (void)b;
  g.backward(g.sum(a));
  CHECK(unused.grad[0] == 0.0);
  CHECK(unused.grad[1] == 0.0);
}

TEST_CASE("elementwise and reduction ops match finite differences") {
  std::mt19937_64 rng(17);
  Param a("a", Group::Theta, random_tensor(rng, {5}));
  Param b("b", Group::Theta, random_tensor(rng, {5}));
  // keep b away from 0 so div stays well-conditioned
  for (std::size_t i = 0; i < b.size(); ++i) b.value[i] += b.value[i] >= 0 ? 1.5 : -1.5;

  check_grads([](Graph& g, Param& pa, Param& pb) {
    return g.sum(g.mul(g.add(g.param(pa), g.param(pb)), g.sub(g.param(pa), g.param(pb))));
  }, a, b);
  check_grads([](Graph& g, Param& pa, Param& pb) {
    return g.sum(g.div(g.param(pa), g.param(pb)));
  }, a, b);
  check_grads([](Graph& g, Param& pa, Param& pb) {
    return g.mean(g.exp(g.mul(g.param(pa), g.sigmoid(g.param(pb)))));
  }, a, b);
  check_grads([](Graph& g, Param& pa, Param& pb) {
    return g.dot(g.tanh(g.param(pa)), g.affine(g.param(pb), -2.0, 0.25));
  }, a, b);
  check_grads([](Graph& g, Param& pa, Param& pb) {
    return g.mul(g.norm2(g.param(pa)), g.norm2(g.param(pb)));
  }, a, b);
  check_grads([](Graph& g, Param& pa, Param& pb) {
    Var shifted = g.affine(g.mul(g.param(pa), g.param(pa)), 1.0, 0.1);
    return g.sum(g.log(shifted));  // log of positive values only
    (void)pb;
  }, a, b);
}

TEST_CASE("matvec, slicing and composition ops match finite differences") {
  std::mt19937_64 rng(23);
  Param w("w", Group::Theta, random_tensor(rng, {3, 4}));
  Param x("x", Group::Theta, random_tensor(rng, {4}));

  check_grads([](Graph& g, Param& pw, Param& px) {
    return g.sum(g.tanh(g.matvec(g.param(pw), g.param(px))));
  }, w, x);
  check_grads([](Graph& g, Param& pw, Param& px) {
    Var v = g.matvec(g.param(pw), g.param(px));
    return g.add(g.pick(v, 1), g.dot(g.slice(v, 0, 2), g.slice(v, 1, 2)));
  }, w, x);
  check_grads([](Graph& g, Param& pw, Param& px) {
    Var r0 = g.row(g.param(pw), 0);
    Var r2 = g.row(g.param(pw), 2);
    return g.norm2(g.concat(g.smul(g.pick(g.param(px), 0), r0), r2));
  }, w, x);
}

TEST_CASE("fused softmax and logsumexp match finite differences") {
  std::mt19937_64 rng(29);
  Param s("s", Group::Theta, random_tensor(rng, {6}));
  Param h("h", Group::Theta, random_tensor(rng, {6}));

  check_grads([](Graph& g, Param& ps, Param& ph) {
    return g.dot(g.masked_softmax(g.param(ps)), g.param(ph));
  }, s, h);
  check_grads([](Graph& g, Param& ps, Param& ph) {
    std::vector<std::uint8_t> mask = {1, 0, 1, 1, 0, 1};
    return g.dot(g.masked_softmax(g.param(ps), mask), g.param(ph));
  }, s, h);
  check_grads([](Graph& g, Param& ps, Param& ph) {
    return g.add(g.logsumexp(g.param(ps)), g.logsumexp(g.param(ph)));
  }, s, h);
}

TEST_CASE("fused softmax agrees with the plain tensor softmax") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 1 + uniform_index(rng, 8);
    Tensor scores = random_tensor(rng, {n});
    std::vector<std::uint8_t> mask(n, 1);
    mask[uniform_index(rng, n)] = 1;  // ensure support
    for (auto& m : mask) m = u01(rng) < 0.8 ? 1 : m;
    Graph g;
    Var y = g.masked_softmax(g.constant(scores), mask);
    Tensor direct = softmax(scores, mask);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(g.value(y)[i] == doctest::Approx(direct[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("graph cosine agrees with the plain cosine") {
  std::mt19937_64 rng(37);
  for (int it = 0; it < 100; ++it) {
    Tensor a = random_tensor(rng, {7});
    Tensor b = random_tensor(rng, {7});
    Graph g;
    Var c = g.cosine(g.constant(a), g.constant(b));
    CHECK(g.value(c).item() ==
          doctest::Approx(cosine_similarity(a, b)).epsilon(1e-14));
  }
}

TEST_CASE("graph cosine gradient matches finite differences") {
  std::mt19937_64 rng(41);
  Param a("a", Group::Theta, random_tensor(rng, {5}));
  Param b("b", Group::Theta, random_tensor(rng, {5}));
  check_grads([](Graph& g, Param& pa, Param& pb) {
    return g.cosine(g.param(pa), g.param(pb));
  }, a, b);
}

TEST_CASE("finite differences: quadratic and sigmoid references") {
  Param x("x", Group::Theta, Tensor::scalar(3.0));
  auto sq = [&]() { return x.value[0] * x.value[0]; };
  Tensor gx = finite_diff_gradient(sq, x);
  CHECK(std::abs(gx[0] - 6.0) < 1e-6);

  Param z("z", Group::Theta, Tensor::scalar(0.0));
  auto sig = [&]() { return 1.0 / (1.0 + std::exp(-z.value[0])); };
  Tensor gz = finite_diff_gradient(sig, z);
  CHECK(std::abs(gz[0] - 0.25) < 1e-7);

  CHECK_THROWS_AS(finite_diff_gradient(sq, x, 0.0), std::invalid_argument);
}

TEST_CASE("param set enforces unique names and disjoint groups") {
  ParamSet ps;
  ps.add("e", Group::Theta, Tensor::vec({1}));
  ps.add("f", Group::Phi, Tensor::vec({2}));
  ps.add("g", Group::Omega, Tensor::vec({3}));
  CHECK_THROWS_AS(ps.add("e", Group::Phi, Tensor::vec({4})), std::invalid_argument);

  std::size_t total = 0;
  for (Group grp : {Group::Theta, Group::Phi, Group::Omega}) {
    for (const Param* p : ps.group(grp)) {
      CHECK(p->group == grp);
      ++total;
    }
  }
  CHECK(total == ps.all().size());
  CHECK(ps.total_size() == 3);

  const std::uint64_t h = ps.value_hash(Group::Phi);
  ps.find("f")->value[0] = 99.0;
  CHECK(ps.value_hash(Group::Phi) != h);
}

TEST_CASE("group names round-trip") {
  for (Group g : {Group::Theta, Group::Phi, Group::Omega}) {
    CHECK(group_from_name(group_name(g)) == g);
  }
  CHECK_THROWS_AS(group_from_name("sigma"), std::invalid_argument);
}
