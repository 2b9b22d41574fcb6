#include "clisr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "clisr/log.hpp"

namespace clisr {

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_size(shape_) != data_.size()) {
    throw std::invalid_argument("Tensor: shape " + shape_str() + " does not match " +
                                std::to_string(data_.size()) + " values");
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  const std::size_t n = shape_size(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
  const std::size_t n = shape_size(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::vec(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw std::invalid_argument("rows(): tensor is not 2-d");
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw std::invalid_argument("cols(): tensor is not 2-d");
  return shape_[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }

double Tensor::at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

double Tensor::item() const {
  if (size() != 1) {
    throw std::invalid_argument("item(): tensor has " + std::to_string(size()) +
                                " elements, expected 1");
  }
  return data_[0];
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << ',';
    os << shape_[i];
  }
  os << ')';
  return os.str();
}

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

double cosine_similarity(const Tensor& a, const Tensor& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("cosine_similarity: empty input");
  }
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_similarity: length mismatch " + a.shape_str() +
                                " vs " + b.shape_str());
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  constexpr double kEps = 1e-12;
  if (na == 0.0 && nb == 0.0) {
    debug_log("cosine_similarity: both vectors are zero, returning 0");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb) + kEps);
}

Tensor softmax(const Tensor& scores, const std::vector<std::uint8_t>& mask) {
  const std::size_t n = scores.size();
  if (n == 0) throw std::invalid_argument("softmax: empty input");
  if (!mask.empty() && mask.size() != n) {
    throw std::invalid_argument("softmax: mask length mismatch");
  }
  auto live = [&](std::size_t i) { return mask.empty() || mask[i] != 0; };

  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (live(i)) max_score = std::max(max_score, scores[i]);
  }
  if (!std::isfinite(max_score)) {
    throw std::invalid_argument("softmax: empty attention support");
  }

  Tensor out = Tensor::zeros({n});
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!live(i)) continue;
    out[i] = std::exp(scores[i] - max_score);
    z += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (live(i)) out[i] /= z;
  }
  return out;
}

}  // namespace clisr
