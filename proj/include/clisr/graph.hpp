#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "clisr/tensor.hpp"

namespace clisr {

// Parameter group tags; the three sets stay disjoint for the whole life of
// a model and regularization/optimizer steps address them independently.
enum class Group { Theta, Phi, Omega };

const char* group_name(Group g);
Group group_from_name(const std::string& name);

/// A trainable tensor. grad has value's shape and accumulates across
/// backward passes until zero_grad(). frozen_row >= 0 marks a matrix row
/// (the PAD embedding row) that is excluded from updates and from L2.
struct Param {
  std::string name;
  Group group;
  Tensor value;
  Tensor grad;
  std::ptrdiff_t frozen_row = -1;

  Param(std::string name_, Group group_, Tensor init);
  void zero_grad();
  std::size_t size() const { return value.size(); }
};

/// Owns every Param of a model. Group membership is fixed at add() time and
/// names are unique, so the Theta/Phi/Omega partition is disjoint and
/// exhaustive by construction.
class ParamSet {
 public:
  Param& add(std::string name, Group group, Tensor init);

  const std::vector<Param*>& group(Group g) const;
  const std::vector<Param*>& all() const { return all_; }
  Param* find(const std::string& name) const;

  void zero_grads();
  std::size_t total_size() const;

  // FNV-1a over the raw value bytes; used to assert that a phase of
  // training did not touch a group it must not touch.
  std::uint64_t value_hash(Group g) const;
  std::uint64_t value_hash() const;

 private:
  std::vector<std::unique_ptr<Param>> owned_;
  std::vector<Param*> all_;
  std::vector<Param*> groups_[3];
};

/// Handle to a node in a Graph.
struct Var {
  std::uint32_t id = 0;
};

/// Reverse-mode differentiation over a recorded operation list (a Wengert
/// tape). Ops append nodes in topological order; backward() seeds the root
/// and sweeps the list once in reverse. Node gradients are allocated on
/// first touch, so subgraphs that do not feed the root cost nothing and
/// Params outside the active pathway keep exactly-zero grads.
///
/// Build one Graph per forward pass and throw it away afterwards; Param
/// leaves accumulate into Param::grad, which outlives the graph.
class Graph {
 public:
  Var constant(Tensor value);
  Var param(Param& p);  // cached: one leaf per Param per graph

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  // Gradient after backward(); empty tensor if the node was unreachable.
  const Tensor& grad(Var v) const { return nodes_[v.id].grad; }

  // elementwise; shapes must match
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  // scale * x + shift, elementwise with scalars
  Var affine(Var x, double scale, double shift);
  Var neg(Var x) { return affine(x, -1.0, 0.0); }

  Var matvec(Var w, Var x);  // (r x c) * (c) -> (r)
  Var dot(Var a, Var b);     // -> scalar
  Var sum(Var x);            // -> scalar
  Var mean(Var x);           // -> scalar
  Var norm2(Var x);          // Euclidean norm -> scalar; zero-safe backward

  Var concat(Var a, Var b);
  Var concat(std::span<const Var> parts);
  Var slice(Var x, std::size_t offset, std::size_t len);  // flat, row-major
  Var row(Var matrix, std::size_t r);                     // one matrix row
  Var pick(Var x, std::size_t index);                     // -> scalar

  Var sigmoid(Var x);
  Var tanh(Var x);
  Var exp(Var x);
  Var log(Var x);

  Var smul(Var scalar, Var x);  // broadcast scalar * tensor

  // Stable softmax over unmasked entries; masked outputs are exactly 0 and
  // propagate no gradient. Empty mask = all live. Throws when all masked.
  Var masked_softmax(Var scores, std::vector<std::uint8_t> mask = {});
  // Stable log(sum(exp(x))) -> scalar.
  Var logsumexp(Var x);

  // dot(a,b) / (|a||b| + 1e-12), composed from primitives -> scalar
  Var cosine(Var a, Var b);

  // Seeds d(root)/d(root) = 1 and runs the reverse sweep. root must be a
  // scalar node; throws otherwise. Repeated calls on fresh graphs accumulate
  // into Param::grad (linearity of backward is a tested property).
  void backward(Var root);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;  // lazy
    std::function<void(Graph&)> back;
  };

  Var push(Tensor value);
  Tensor& grad_ref(std::uint32_t id);
  void check_same_shape(Var a, Var b, const char* op) const;

  std::vector<Node> nodes_;
  std::unordered_map<const Param*, std::uint32_t> param_leaves_;
};

/// Central finite differences of loss_fn with respect to every coordinate
/// of p.value: (f(x+h) - f(x-h)) / 2h. loss_fn must be deterministic (fix
/// all RNG seeds before capturing it). p.value is restored on exit.
Tensor finite_diff_gradient(const std::function<double()>& loss_fn, Param& p,
                            double h = 1e-5);

/// max_i |a_i - n_i| / max(|a_i|, |n_i|, floor). The absolute floor keeps
/// coordinate pairs that are both ~0 from blowing up the ratio; finite
/// difference noise is ~1e-9 at h=1e-5 in double precision, far below
/// floor * tolerance for the 1e-4 gate used throughout.
double max_relative_error(const Tensor& analytic, const Tensor& numeric,
                          double floor = 1e-3);

}  // namespace clisr
