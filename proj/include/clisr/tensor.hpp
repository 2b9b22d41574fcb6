#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace clisr {

/// Dense row-major array of doubles: the numeric substrate for activations,
/// parameters and gradients. Scalars are shape {1}; vectors {n}; matrices
/// {rows, cols}. Values are plain; all differentiation happens in Graph.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor full(std::vector<std::size_t> shape, double value);
  static Tensor scalar(double value);
  static Tensor vec(std::vector<double> values);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t rank() const { return shape_.size(); }

  // 2-d accessors; require rank 2
  std::size_t rows() const;
  std::size_t cols() const;
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Value of a single-element tensor.
  double item() const;

  bool all_finite() const;
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_str() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::size_t shape_size(const std::vector<std::size_t>& shape);

/// Cosine similarity a.b / (|a||b| + eps), eps = 1e-12. The guard makes a
/// pair of zero vectors come out as 0; that case is noted on the debug log.
/// Throws std::invalid_argument on length mismatch or empty input.
double cosine_similarity(const Tensor& a, const Tensor& b);

/// Numerically stable (max-subtracted) softmax over the unmasked entries of
/// a score vector. Masked positions are exactly 0 in the output. An empty
/// mask means all positions are live. Throws std::invalid_argument when
/// every position is masked ("empty attention support").
Tensor softmax(const Tensor& scores, const std::vector<std::uint8_t>& mask = {});

}  // namespace clisr
