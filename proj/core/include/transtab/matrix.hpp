#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace transtab {

// Dense row-major float32 matrix. Storage precision matches the on-disk
// format so a write/read round trip is bit-exact; numerical code converts to
// double through to_eigen().
class Matrix {
 public:
  Matrix() = default;
  // Throws ValidationError if rows or cols is zero, the payload size does not
  // match, or any entry is non-finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const float> data() const { return data_; }
  std::span<const float> row(std::size_t r) const {
    return std::span<const float>(data_).subspan(r * cols_, cols_);
  }
  float operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Eigen::MatrixXd to_eigen() const;
  static Matrix from_eigen(const Eigen::MatrixXd& m);

  // New matrix holding the given rows, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// n x d embeddings of target samples produced by a source feature extractor.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(Matrix m) : m_(std::move(m)) {}

  const Matrix& matrix() const { return m_; }
  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  Eigen::MatrixXd to_eigen() const { return m_.to_eigen(); }
  FeatureMatrix select_rows(std::span<const std::size_t> idx) const {
    return FeatureMatrix(m_.select_rows(idx));
  }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  Matrix m_;
};

// n x z source-classifier output distributions; every row sums to one.
class PredictionMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-5;

  PredictionMatrix() = default;
  // Throws ValidationError naming the first offending row.
  explicit PredictionMatrix(Matrix m);

  const Matrix& matrix() const { return m_; }
  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  Eigen::MatrixXd to_eigen() const { return m_.to_eigen(); }
  PredictionMatrix select_rows(std::span<const std::size_t> idx) const {
    return PredictionMatrix(m_.select_rows(idx));
  }

  friend bool operator==(const PredictionMatrix&, const PredictionMatrix&) = default;

 private:
  Matrix m_;
};

// Integer target class id per sample. class_count is one past the largest id
// unless given explicitly; ids need not all be present.
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(std::vector<std::int32_t> ids);
  LabelVector(std::vector<std::int32_t> ids, std::int32_t class_count);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::int32_t class_count() const { return class_count_; }
  std::span<const std::int32_t> ids() const { return ids_; }
  std::int32_t operator[](std::size_t i) const { return ids_[i]; }

  // Samples per class id, indexed 0..class_count-1.
  std::vector<std::size_t> class_frequencies() const;
  // Number of class ids that actually occur.
  std::size_t distinct_classes() const;

  LabelVector select(std::span<const std::size_t> idx) const;

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<std::int32_t> ids_;
  std::int32_t class_count_ = 0;
};

}  // namespace transtab
