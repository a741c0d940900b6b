#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transtab/matrix.hpp"

namespace transtab {

// Binary matrix layout: "TMX1", then uint32 version, rows, cols (all
// little-endian), then rows*cols little-endian IEEE-754 float32 values in
// row-major order.
inline constexpr char kMatrixMagic[4] = {'T', 'M', 'X', '1'};
inline constexpr std::uint32_t kMatrixVersion = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 16;

Matrix read_matrix(const std::filesystem::path& path);
FeatureMatrix read_features(const std::filesystem::path& path);
PredictionMatrix read_predictions(const std::filesystem::path& path);
void write_matrix(const Matrix& m, const std::filesystem::path& path);

// One integer class id per line. Blank lines are ignored.
LabelVector read_labels(const std::filesystem::path& path);
void write_labels(const LabelVector& labels, const std::filesystem::path& path);

// True fine-tuning accuracies keyed by (source_id, target_id). Accuracy must
// lie in [0, 1]; percentages are rejected.
class TransferTable {
 public:
  using Key = std::pair<std::string, std::string>;

  // Throws ValidationError on duplicates or out-of-range accuracy.
  void add(const std::string& source, const std::string& target, double accuracy);
  std::optional<double> find(const std::string& source, const std::string& target) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<Key, double>& entries() const { return entries_; }

  friend bool operator==(const TransferTable&, const TransferTable&) = default;

 private:
  std::map<Key, double> entries_;
};

// CSV with header "source_id,target_id,accuracy".
TransferTable read_transfer_table(const std::filesystem::path& path);
void write_transfer_table(const TransferTable& table, const std::filesystem::path& path);

}  // namespace transtab
