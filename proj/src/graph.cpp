#include "clisr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace clisr {

const char* group_name(Group g) {
  switch (g) {
    case Group::Theta: return "theta";
    case Group::Phi: return "phi";
    case Group::Omega: return "omega";
  }
  return "?";
}

Group group_from_name(const std::string& name) {
  if (name == "theta") return Group::Theta;
  if (name == "phi") return Group::Phi;
  if (name == "omega") return Group::Omega;
  throw std::invalid_argument("unknown parameter group: " + name);
}

Param::Param(std::string name_, Group group_, Tensor init)
    : name(std::move(name_)),
      group(group_),
      grad(Tensor::zeros(init.shape())),
      frozen_row(-1) {
  value = std::move(init);
}

void Param::zero_grad() { grad = Tensor::zeros(value.shape()); }

Param& ParamSet::add(std::string name, Group group, Tensor init) {
  if (find(name) != nullptr) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  owned_.push_back(std::make_unique<Param>(std::move(name), group, std::move(init)));
  Param* p = owned_.back().get();
  all_.push_back(p);
  groups_[static_cast<int>(group)].push_back(p);
  return *p;
}

const std::vector<Param*>& ParamSet::group(Group g) const {
  return groups_[static_cast<int>(g)];
}

Param* ParamSet::find(const std::string& name) const {
  for (Param* p : all_) {
    if (p->name == name) return p;
  }
  return nullptr;
}

void ParamSet::zero_grads() {
  for (Param* p : all_) p->zero_grad();
}

std::size_t ParamSet::total_size() const {
  std::size_t n = 0;
  for (const Param* p : all_) n += p->size();
  return n;
}

namespace {
std::uint64_t fnv1a(std::uint64_t h, const double* data, std::size_t n) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n * sizeof(double); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace

std::uint64_t ParamSet::value_hash(Group g) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Param* p : group(g)) h = fnv1a(h, p->value.data(), p->value.size());
  return h;
}

std::uint64_t ParamSet::value_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Param* p : all_) h = fnv1a(h, p->value.data(), p->value.size());
  return h;
}

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

Var Graph::push(Tensor value) {
  nodes_.push_back(Node{std::move(value), Tensor{}, nullptr});
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Tensor& Graph::grad_ref(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor::zeros(n.value.shape());
  return n.grad;
}

void Graph::check_same_shape(Var a, Var b, const char* op) const {
  if (!value(a).same_shape(value(b))) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                value(a).shape_str() + " vs " + value(b).shape_str());
  }
}

Var Graph::constant(Tensor value) { return push(std::move(value)); }

Var Graph::param(Param& p) {
  auto it = param_leaves_.find(&p);
  if (it != param_leaves_.end()) return Var{it->second};
  Var v = push(p.value);  // copy; the graph must not alias live parameters
  Param* pp = &p;
  nodes_[v.id].back = [v, pp](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    for (std::size_t i = 0; i < gr.size(); ++i) pp->grad[i] += gr[i];
  };
  param_leaves_.emplace(&p, v.id);
  return v;
}

Var Graph::add(Var a, Var b) {
  check_same_shape(a, b, "add");
  Tensor out = value(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += value(b)[i];
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, a, b](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    Tensor& ga = g.grad_ref(a.id);
    Tensor& gb = g.grad_ref(b.id);
    for (std::size_t i = 0; i < gr.size(); ++i) {
      ga[i] += gr[i];
      gb[i] += gr[i];
    }
  };
  return v;
}

Var Graph::sub(Var a, Var b) {
  check_same_shape(a, b, "sub");
  Tensor out = value(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= value(b)[i];
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, a, b](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    Tensor& ga = g.grad_ref(a.id);
    Tensor& gb = g.grad_ref(b.id);
    for (std::size_t i = 0; i < gr.size(); ++i) {
      ga[i] += gr[i];
      gb[i] -= gr[i];
    }
  };
  return v;
}

Var Graph::mul(Var a, Var b) {
  check_same_shape(a, b, "mul");
  Tensor out = value(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= value(b)[i];
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, a, b](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& va = g.value(a);
    const Tensor& vb = g.value(b);
    Tensor& ga = g.grad_ref(a.id);
    Tensor& gb = g.grad_ref(b.id);
    for (std::size_t i = 0; i < gr.size(); ++i) {
      ga[i] += gr[i] * vb[i];
      gb[i] += gr[i] * va[i];
    }
  };
  return v;
}

Var Graph::div(Var a, Var b) {
  check_same_shape(a, b, "div");
  Tensor out = value(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= value(b)[i];
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, a, b](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& va = g.value(a);
    const Tensor& vb = g.value(b);
    Tensor& ga = g.grad_ref(a.id);
    Tensor& gb = g.grad_ref(b.id);
    for (std::size_t i = 0; i < gr.size(); ++i) {
      ga[i] += gr[i] / vb[i];
      gb[i] -= gr[i] * va[i] / (vb[i] * vb[i]);
    }
  };
  return v;
}

Var Graph::affine(Var x, double scale, double shift) {
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * out[i] + shift;
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, x, scale](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < gr.size(); ++i) gx[i] += scale * gr[i];
  };
  return v;
}

Var Graph::matvec(Var w, Var x) {
  const Tensor& W = value(w);
  const Tensor& X = value(x);
  if (W.rank() != 2 || X.rank() != 1 || W.cols() != X.size()) {
    throw std::invalid_argument("matvec: incompatible shapes " + W.shape_str() +
                                " * " + X.shape_str());
  }
  const std::size_t r = W.rows(), c = W.cols();
  Tensor out = Tensor::zeros({r});
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    const double* wrow = W.data() + i * c;
    for (std::size_t j = 0; j < c; ++j) acc += wrow[j] * X[j];
    out[i] = acc;
  }
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, w, x, r, c](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& W_ = g.value(w);
    const Tensor& X_ = g.value(x);
    Tensor& gw = g.grad_ref(w.id);
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < r; ++i) {
      const double gi = gr[i];
      if (gi == 0.0) continue;
      double* gwrow = gw.data() + i * c;
      const double* wrow = W_.data() + i * c;
      for (std::size_t j = 0; j < c; ++j) {
        gwrow[j] += gi * X_[j];
        gx[j] += gi * wrow[j];
      }
    }
  };
  return v;
}

Var Graph::dot(Var a, Var b) {
  check_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < value(a).size(); ++i) acc += value(a)[i] * value(b)[i];
  Var v = push(Tensor::scalar(acc));
  nodes_[v.id].back = [v, a, b](Graph& g) {
    const double gr = g.nodes_[v.id].grad[0];
    const Tensor& va = g.value(a);
    const Tensor& vb = g.value(b);
    Tensor& ga = g.grad_ref(a.id);
    Tensor& gb = g.grad_ref(b.id);
    for (std::size_t i = 0; i < va.size(); ++i) {
      ga[i] += gr * vb[i];
      gb[i] += gr * va[i];
    }
  };
  return v;
}

Var Graph::sum(Var x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < value(x).size(); ++i) acc += value(x)[i];
  Var v = push(Tensor::scalar(acc));
  nodes_[v.id].back = [v, x](Graph& g) {
    const double gr = g.nodes_[v.id].grad[0];
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += gr;
  };
  return v;
}

Var Graph::mean(Var x) {
  const std::size_t n = value(x).size();
  return affine(sum(x), 1.0 / static_cast<double>(n), 0.0);
}

Var Graph::norm2(Var x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < value(x).size(); ++i) acc += value(x)[i] * value(x)[i];
  const double nrm = std::sqrt(acc);
  Var v = push(Tensor::scalar(nrm));
  nodes_[v.id].back = [v, x](Graph& g) {
    const double nrm_ = g.nodes_[v.id].value[0];
    if (nrm_ == 0.0) return;  // subgradient 0 at the origin
    const double gr = g.nodes_[v.id].grad[0];
    const Tensor& vx = g.value(x);
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < vx.size(); ++i) gx[i] += gr * vx[i] / nrm_;
  };
  return v;
}

Var Graph::concat(Var a, Var b) {
  const Var parts[2] = {a, b};
  return concat(std::span<const Var>(parts, 2));
}

Var Graph::concat(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no parts");
  std::size_t total = 0;
  for (Var p : parts) total += value(p).size();
  Tensor out = Tensor::zeros({total});
  std::size_t off = 0;
  for (Var p : parts) {
    const Tensor& t = value(p);
    std::copy(t.data(), t.data() + t.size(), out.data() + off);
    off += t.size();
  }
  std::vector<Var> kept(parts.begin(), parts.end());
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, kept = std::move(kept)](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    std::size_t off_ = 0;
    for (Var p : kept) {
      Tensor& gp = g.grad_ref(p.id);
      for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += gr[off_ + i];
      off_ += gp.size();
    }
  };
  return v;
}

Var Graph::slice(Var x, std::size_t offset, std::size_t len) {
  const Tensor& t = value(x);
  if (offset + len > t.size()) throw std::invalid_argument("slice: out of range");
  Tensor out = Tensor::zeros({len});
  std::copy(t.data() + offset, t.data() + offset + len, out.data());
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, x, offset, len](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < len; ++i) gx[offset + i] += gr[i];
  };
  return v;
}

Var Graph::row(Var matrix, std::size_t r) {
  const Tensor& m = value(matrix);
  if (m.rank() != 2) throw std::invalid_argument("row: tensor is not 2-d");
  if (r >= m.rows()) throw std::invalid_argument("row: index out of range");
  return slice(matrix, r * m.cols(), m.cols());
}

Var Graph::pick(Var x, std::size_t index) {
  if (index >= value(x).size()) throw std::invalid_argument("pick: index out of range");
  Var v = push(Tensor::scalar(value(x)[index]));
  nodes_[v.id].back = [v, x, index](Graph& g) {
    g.grad_ref(x.id)[index] += g.nodes_[v.id].grad[0];
  };
  return v;
}

Var Graph::sigmoid(Var x) {
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-out[i]));
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, x](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& s = g.nodes_[v.id].value;
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < gr.size(); ++i) gx[i] += gr[i] * s[i] * (1.0 - s[i]);
  };
  return v;
}

Var Graph::tanh(Var x) {
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, x](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& t = g.nodes_[v.id].value;
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < gr.size(); ++i) gx[i] += gr[i] * (1.0 - t[i] * t[i]);
  };
  return v;
}

Var Graph::exp(Var x) {
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(out[i]);
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, x](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& e = g.nodes_[v.id].value;
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < gr.size(); ++i) gx[i] += gr[i] * e[i];
  };
  return v;
}

Var Graph::log(Var x) {
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(out[i]);
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, x](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& vx = g.value(x);
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < gr.size(); ++i) gx[i] += gr[i] / vx[i];
  };
  return v;
}

Var Graph::smul(Var scalar, Var x) {
  if (value(scalar).size() != 1) {
    throw std::invalid_argument("smul: first argument must be a scalar node");
  }
  const double s = value(scalar)[0];
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, scalar, x](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const double s_ = g.value(scalar)[0];
    const Tensor& vx = g.value(x);
    Tensor& gs = g.grad_ref(scalar.id);
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < gr.size(); ++i) {
      gs[0] += gr[i] * vx[i];
      gx[i] += gr[i] * s_;
    }
  };
  return v;
}

Var Graph::masked_softmax(Var scores, std::vector<std::uint8_t> mask) {
  Tensor out = softmax(value(scores), mask);  // validates mask and support
  Var v = push(std::move(out));
  nodes_[v.id].back = [v, scores, mask = std::move(mask)](Graph& g) {
    const Tensor& gr = g.nodes_[v.id].grad;
    const Tensor& y = g.nodes_[v.id].value;
    Tensor& gx = g.grad_ref(scores.id);
    auto live = [&](std::size_t i) { return mask.empty() || mask[i] != 0; };
    double inner = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (live(i)) inner += gr[i] * y[i];
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (live(i)) gx[i] += y[i] * (gr[i] - inner);
    }
  };
  return v;
}

Var Graph::logsumexp(Var x) {
  const Tensor& t = value(x);
  if (t.size() == 0) throw std::invalid_argument("logsumexp: empty input");
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, t[i]);
  double z = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) z += std::exp(t[i] - m);
  Var v = push(Tensor::scalar(m + std::log(z)));
  nodes_[v.id].back = [v, x](Graph& g) {
    const double gr = g.nodes_[v.id].grad[0];
    const double out = g.nodes_[v.id].value[0];
    const Tensor& vx = g.value(x);
    Tensor& gx = g.grad_ref(x.id);
    for (std::size_t i = 0; i < vx.size(); ++i) gx[i] += gr * std::exp(vx[i] - out);
  };
  return v;
}

Var Graph::cosine(Var a, Var b) {
  check_same_shape(a, b, "cosine");
  Var num = dot(a, b);
  Var den = affine(mul(norm2(a), norm2(b)), 1.0, 1e-12);
  return div(num, den);
}

void Graph::backward(Var root) {
  if (value(root).size() != 1) {
    throw std::invalid_argument("backward: root must be a scalar, got shape " +
                                value(root).shape_str());
  }
  grad_ref(root.id)[0] += 1.0;
  for (std::uint32_t i = root.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.empty() || !n.back) continue;
    n.back(*this);
  }
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

Tensor finite_diff_gradient(const std::function<double()>& loss_fn, Param& p,
                            double h) {
  if (h <= 0.0) throw std::invalid_argument("finite_diff_gradient: h must be > 0");
  Tensor out = Tensor::zeros(p.value.shape());
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    const double saved = p.value[i];
    p.value[i] = saved + h;
    const double up = loss_fn();
    p.value[i] = saved - h;
    const double down = loss_fn();
    p.value[i] = saved;
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

double max_relative_error(const Tensor& analytic, const Tensor& numeric,
                          double floor) {
  if (!analytic.same_shape(numeric)) {
    throw std::invalid_argument("max_relative_error: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i], n = numeric[i];
    const double denom = std::max({std::abs(a), std::abs(n), floor});
    worst = std::max(worst, std::abs(a - n) / denom);
  }
  return worst;
}

}  // namespace clisr
