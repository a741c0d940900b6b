#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "transtab/errors.hpp"
#include "transtab/io.hpp"

namespace transtab {
namespace {

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

void put_u32(std::string& buf, std::uint32_t v) {
  v = to_little(v);
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  buf.append(bytes, 4);
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return to_little(v);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void dump(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Matrix read_matrix(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() < kMatrixHeaderBytes) {
    throw FormatError(path.string() + ": file shorter than the 16-byte header");
  }
  if (std::memcmp(bytes.data(), kMatrixMagic, 4) != 0) {
    throw FormatError(path.string() + ": bad magic, expected TMX1");
  }
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kMatrixVersion) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
  }
  const std::size_t rows = get_u32(bytes.data() + 8);
  const std::size_t cols = get_u32(bytes.data() + 12);
  const std::size_t expected = kMatrixHeaderBytes + 4 * rows * cols;
  if (bytes.size() != expected) {
    throw FormatError(path.string() + ": payload is " + std::to_string(bytes.size()) +
                      " bytes, header implies " + std::to_string(expected));
  }
  std::vector<float> data(rows * cols);
  const char* p = bytes.data() + kMatrixHeaderBytes;
  for (std::size_t i = 0; i < data.size(); ++i, p += 4) {
    std::uint32_t raw = get_u32(p);
    data[i] = std::bit_cast<float>(raw);
  }
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  return FeatureMatrix(read_matrix(path));
}

PredictionMatrix read_predictions(const std::filesystem::path& path) {
  Matrix m = read_matrix(path);
  try {
    return PredictionMatrix(std::move(m));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
  if (m.rows() == 0 || m.cols() == 0) throw ValidationError("refusing to write an empty matrix");
  std::string buf;
  buf.reserve(kMatrixHeaderBytes + 4 * m.data().size());
  buf.append(kMatrixMagic, 4);
  put_u32(buf, kMatrixVersion);
  put_u32(buf, static_cast<std::uint32_t>(m.rows()));
  put_u32(buf, static_cast<std::uint32_t>(m.cols()));
  for (float v : m.data()) put_u32(buf, std::bit_cast<std::uint32_t>(v));
  dump(path, buf);
}

LabelVector read_labels(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  std::vector<std::int32_t> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    std::int32_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": not an integer: '" +
                        std::string(line) + "'");
    }
    if (v < 0) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": negative class id");
    }
    ids.push_back(v);
  }
  if (ids.empty()) throw ValidationError(path.string() + ": no labels");
  return LabelVector(std::move(ids));
}

void write_labels(const LabelVector& labels, const std::filesystem::path& path) {
  std::string buf;
  for (auto id : labels.ids()) {
    buf += std::to_string(id);
    buf += '\n';
  }
  dump(path, buf);
}

void TransferTable::add(const std::string& source, const std::string& target, double accuracy) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw ValidationError("accuracy for (" + source + ", " + target + ") is " +
                          std::to_string(accuracy) + "; expected a fraction in [0, 1]");
  }
  auto [it, inserted] = entries_.emplace(Key{source, target}, accuracy);
  if (!inserted) {
    throw ValidationError("duplicate accuracy entry for (" + source + ", " + target + ")");
  }
}

std::optional<double> TransferTable::find(const std::string& source,
                                          const std::string& target) const {
  auto it = entries_.find(Key{source, target});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

TransferTable read_transfer_table(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  TransferTable table;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "source_id,target_id,accuracy") {
        throw FormatError(path.string() + ": expected header 'source_id,target_id,accuracy'");
      }
      header_seen = true;
      continue;
    }
    auto c1 = line.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    std::string source(trim(line.substr(0, c1)));
    std::string target(trim(line.substr(c1 + 1, c2 - c1 - 1)));
    std::string_view acc_text = trim(line.substr(c2 + 1));
    double acc = 0.0;
    auto [ptr, ec] = std::from_chars(acc_text.data(), acc_text.data() + acc_text.size(), acc);
    if (ec != std::errc() || ptr != acc_text.data() + acc_text.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad accuracy '" +
                        std::string(acc_text) + "'");
    }
    try {
      table.add(source, target, acc);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw FormatError(path.string() + ": empty transfer table");
  return table;
}

void write_transfer_table(const TransferTable& table, const std::filesystem::path& path) {
  std::string buf = "source_id,target_id,accuracy\n";
  char num[64];
  for (const auto& [key, acc] : table.entries()) {
    auto res = std::to_chars(num, num + sizeof(num), acc);
    buf += key.first;
    buf += ',';
    buf += key.second;
    buf += ',';
    buf.append(num, res.ptr);
    buf += '\n';
  }
  dump(path, buf);
}

}  // namespace transtab
