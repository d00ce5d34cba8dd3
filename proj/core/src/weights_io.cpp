// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace splatfuse {
namespace {

static_assert(std::endian::native == std::endian::little,
              "SPLF I/O assumes a little-endian host");

constexpr char kMagic[4] = {'S', 'P', 'L', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
T read_pod(std::istream& in, const std::filesystem::path& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error(path.string() + ": truncated weights file");
  return value;
}

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

const Eigen::MatrixXf* WeightsFile::find(const std::string& name) const {
  for (const auto& [n, m] : sections) {
    if (n == name) return &m;
  }
  return nullptr;
}

WeightsFile load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error(path.string() + ": not an SPLF weights file");
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw std::runtime_error(path.string() + ": unsupported SPLF version " +
                             std::to_string(version));
  }
  WeightsFile weights;
  weights.feature_dim = read_pod<std::uint32_t>(in, path);
  const auto section_count = read_pod<std::uint32_t>(in, path);

  struct Entry {
    std::string name;
    std::uint32_t rows, cols;
    std::uint64_t offset;
  };
  std::vector<Entry> entries;
  for (std::uint32_t i = 0; i < section_count; ++i) {
    const auto name_len = read_pod<std::uint32_t>(in, path);
    if (name_len > 256) throw std::runtime_error(path.string() + ": section name too long");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw std::runtime_error(path.string() + ": truncated weights file");
    const auto rows = read_pod<std::uint32_t>(in, path);
    const auto cols = read_pod<std::uint32_t>(in, path);
    const auto offset = read_pod<std::uint64_t>(in, path);
    entries.push_back({std::move(name), rows, cols, offset});
  }
  for (const Entry& e : entries) {
    in.seekg(static_cast<std::streamoff>(e.offset));
    std::vector<float> values(static_cast<std::size_t>(e.rows) * e.cols);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(float)));
    if (!in) {
      throw std::runtime_error(path.string() + ": truncated payload for section " + e.name);
    }
    Eigen::MatrixXf m(e.rows, e.cols);
    for (std::uint32_t r = 0; r < e.rows; ++r) {
      for (std::uint32_t c = 0; c < e.cols; ++c) {
        m(r, c) = values[static_cast<std::size_t>(r) * e.cols + c];
      }
    }
    weights.sections.emplace_back(e.name, std::move(m));
  }
  return weights;
}

void save_weights(const WeightsFile& weights, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, weights.feature_dim);
  write_pod(out, static_cast<std::uint32_t>(weights.sections.size()));

  std::uint64_t offset = 4 + 3 * sizeof(std::uint32_t);
  for (const auto& [name, m] : weights.sections) {
    offset += sizeof(std::uint32_t) + name.size() + 2 * sizeof(std::uint32_t) +
              sizeof(std::uint64_t);
  }
  for (const auto& [name, m] : weights.sections) {
    write_pod(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod(out, static_cast<std::uint32_t>(m.rows()));
    write_pod(out, static_cast<std::uint32_t>(m.cols()));
    write_pod(out, offset);
    offset += static_cast<std::uint64_t>(m.size()) * sizeof(float);
  }
  for (const auto& [name, m] : weights.sections) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        write_pod(out, m(r, c));
      }
    }
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

GruParams gru_from_weights(const WeightsFile& weights) {
  const int dim = static_cast<int>(weights.feature_dim);
  const auto matrix = [&](const char* name) {
    const Eigen::MatrixXf* m = weights.find(name);
    if (m == nullptr) throw std::runtime_error(std::string("missing SPLF section ") + name);
    if (m->rows() != dim || m->cols() != dim) {
      throw std::runtime_error(std::string("SPLF section ") + name + " has wrong shape");
    }
    return *m;
  };
  const auto bias = [&](const char* name) {
    const Eigen::MatrixXf* m = weights.find(name);
    if (m == nullptr) throw std::runtime_error(std::string("missing SPLF section ") + name);
    if (m->rows() != dim || m->cols() != 1) {
      throw std::runtime_error(std::string("SPLF section ") + name + " has wrong shape");
    }
    return Eigen::VectorXf(m->col(0));
  };
  GruParams params;
  params.Wz = matrix("gru.Wz");
  params.Uz = matrix("gru.Uz");
  params.bz = bias("gru.bz");
  params.Wr = matrix("gru.Wr");
  params.Ur = matrix("gru.Ur");
  params.br = bias("gru.br");
  params.Wh = matrix("gru.Wh");
  params.Uh = matrix("gru.Uh");
  params.bh = bias("gru.bh");
  params.validate(dim);
  return params;
}

DecoderParams decoder_from_weights(const WeightsFile& weights) {
  const Eigen::MatrixXf* w = weights.find("dec.W");
  const Eigen::MatrixXf* b = weights.find("dec.b");
  if (w == nullptr || b == nullptr) throw std::runtime_error("missing SPLF decoder sections");
  DecoderParams params{*w, Eigen::VectorXf(b->col(0))};
  if (b->cols() != 1) throw std::runtime_error("SPLF section dec.b has wrong shape");
  params.validate(static_cast<int>(weights.feature_dim));
  return params;
}

}  // namespace splatfuse
