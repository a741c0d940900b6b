#include "transtab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "transtab/errors.hpp"

namespace transtab {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows_ == 0 || cols_ == 0) {
    throw ValidationError("matrix must have at least one row and one column (got " +
                          std::to_string(rows_) + "x" + std::to_string(cols_) + ")");
  }
  if (data_.size() != rows_ * cols_) {
    throw ValidationError("matrix payload has " + std::to_string(data_.size()) +
                          " values, expected " + std::to_string(rows_ * cols_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ValidationError("non-finite matrix entry at row " + std::to_string(i / cols_) +
                            ", column " + std::to_string(i % cols_));
    }
  }
}

Eigen::MatrixXd Matrix::to_eigen() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = data_[r * cols_ + c];
  }
  return out;
}

Matrix Matrix::from_eigen(const Eigen::MatrixXd& m) {
  std::vector<float> data(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data[r * m.cols() + c] = static_cast<float>(m(r, c));
    }
  }
  return Matrix(m.rows(), m.cols(), std::move(data));
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  std::vector<float> data;
  data.reserve(indices.size() * cols_);
  for (std::size_t idx : indices) {
    if (idx >= rows_) throw ValidationError("row index " + std::to_string(idx) + " out of range");
    auto r = row(idx);
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(indices.size(), cols_, std::move(data));
}

PredictionMatrix::PredictionMatrix(Matrix m) : m_(std::move(m)) {
  for (std::size_t r = 0; r < m_.rows(); ++r) {
    double sum = 0.0;
    for (float v : m_.row(r)) {
      if (v < 0.0f || v > 1.0f) {
        throw ValidationError("prediction row " + std::to_string(r) +
                              " has an entry outside [0, 1]: " + std::to_string(v));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("prediction row " + std::to_string(r) + " sums to " +
                            std::to_string(sum) + ", expected 1");
    }
  }
}

LabelVector::LabelVector(std::vector<std::int32_t> ids) : ids_(std::move(ids)) {
  std::int32_t max_id = -1;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] < 0) {
      throw ValidationError("negative class id " + std::to_string(ids_[i]) + " at index " +
                            std::to_string(i));
    }
    max_id = std::max(max_id, ids_[i]);
  }
  class_count_ = max_id + 1;
}

LabelVector::LabelVector(std::vector<std::int32_t> ids, std::int32_t class_count)
    : ids_(std::move(ids)), class_count_(class_count) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] < 0 || ids_[i] >= class_count_) {
      throw ValidationError("class id " + std::to_string(ids_[i]) + " at index " +
                            std::to_string(i) + " outside [0, " + std::to_string(class_count_) +
                            ")");
    }
  }
}

std::vector<std::size_t> LabelVector::class_frequencies() const {
  std::vector<std::size_t> freq(static_cast<std::size_t>(class_count_), 0);
  for (auto id : ids_) ++freq[static_cast<std::size_t>(id)];
  return freq;
}

std::size_t LabelVector::distinct_classes() const {
  auto freq = class_frequencies();
  return static_cast<std::size_t>(std::count_if(freq.begin(), freq.end(), [](auto f) { return f > 0; }));
}

LabelVector LabelVector::select(std::span<const std::size_t> idx) const {
  std::vector<std::int32_t> out;
  out.reserve(idx.size());
  for (auto i : idx) {
    if (i >= ids_.size()) throw ValidationError("label index " + std::to_string(i) + " out of range");
    out.push_back(ids_[i]);
  }
  return LabelVector(std::move(out), class_count_);
}

}  // namespace transtab
