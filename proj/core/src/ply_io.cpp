// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/io/ply_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace splatfuse {
namespace {

static_assert(std::endian::native == std::endian::little,
              "PLY I/O assumes a little-endian host");

std::vector<std::string> property_names(int sh_degree) {
  std::vector<std::string> names = {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
  if (sh_degree == 1) {
    for (int i = 0; i < 9; ++i) names.push_back("f_rest_" + std::to_string(i));
  }
  for (const char* n : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"}) {
    names.push_back(n);
  }
  return names;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t byte_offset,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what + " (at byte " +
                           std::to_string(byte_offset) + ")");
}

}  // namespace

void export_ply(const GaussianPrimitiveSet& prims, const std::filesystem::path& path) {
  prims.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");

  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\nelement vertex " << prims.size() << "\n";
  for (const std::string& name : property_names(prims.sh_degree)) {
    header << "property float " << name << "\n";
  }
  header << "end_header\n";
  out << header.str();

  const int coeffs = prims.sh_coeff_count();
  std::vector<float> row(6 + coeffs + 8);
  for (std::size_t i = 0; i < prims.size(); ++i) {
    float* p = row.data();
    std::memcpy(p, prims.centers.data() + 3 * i, 3 * sizeof(float));
    p += 3;
    p[0] = p[1] = p[2] = 0.0f;  // normals
    p += 3;
    std::memcpy(p, prims.sh.data() + static_cast<std::size_t>(coeffs) * i,
                coeffs * sizeof(float));
    p += coeffs;
    *p++ = prims.opacity_logits[i];
    std::memcpy(p, prims.log_scales.data() + 3 * i, 3 * sizeof(float));
    p += 3;
    std::memcpy(p, prims.rotations.data() + 4 * i, 4 * sizeof(float));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

GaussianPrimitiveSet import_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");

  std::size_t offset = 0;
  const auto read_line = [&](std::string& line) {
    if (!std::getline(in, line)) fail(path, offset, "unexpected end of header");
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  std::string line;
  read_line(line);
  if (line != "ply") fail(path, 0, "missing ply magic");
  read_line(line);
  if (line != "format binary_little_endian 1.0") fail(path, offset - line.size() - 1,
                                                      "unsupported format '" + line + "'");

  std::size_t vertex_count = 0;
  bool has_vertex_element = false;
  std::vector<std::string> props;
  std::vector<std::size_t> prop_offsets;
  while (true) {
    const std::size_t line_start = offset;
    read_line(line);
    if (line == "end_header") break;
    std::istringstream tokens(line);
    std::string keyword;
    tokens >> keyword;
    if (keyword == "comment") continue;
    if (keyword == "element") {
      std::string name;
      tokens >> name >> vertex_count;
      if (name != "vertex" || has_vertex_element) {
        fail(path, line_start, "unsupported element '" + name + "'");
      }
      has_vertex_element = true;
    } else if (keyword == "property") {
      std::string type, name;
      tokens >> type >> name;
      if (!has_vertex_element) fail(path, line_start, "property before element");
      if (type != "float") fail(path, line_start, "unsupported property type '" + type + "'");
      props.push_back(name);
      prop_offsets.push_back(line_start);
    } else {
      fail(path, line_start, "unexpected header line '" + line + "'");
    }
  }
  if (!has_vertex_element) fail(path, offset, "missing vertex element");

  int sh_degree = -1;
  for (int degree : {0, 1}) {
    if (props == property_names(degree)) sh_degree = degree;
  }
  if (sh_degree < 0) {
    // Report the first property that deviates from either schema.
    const std::vector<std::string> want0 = property_names(0), want1 = property_names(1);
    for (std::size_t i = 0; i < props.size(); ++i) {
      const bool in0 = i < want0.size() && props[i] == want0[i];
      const bool in1 = i < want1.size() && props[i] == want1[i];
      if (!in0 && !in1) {
        fail(path, prop_offsets[i], "unknown property '" + props[i] + "'");
      }
    }
    fail(path, offset, "incomplete property list");
  }

  GaussianPrimitiveSet prims;
  prims.sh_degree = sh_degree;
  const int coeffs = prims.sh_coeff_count();
  prims.centers.resize(3 * vertex_count);
  prims.log_scales.resize(3 * vertex_count);
  prims.rotations.resize(4 * vertex_count);
  prims.opacity_logits.resize(vertex_count);
  prims.sh.resize(static_cast<std::size_t>(coeffs) * vertex_count);

  std::vector<float> row(6 + coeffs + 8);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) fail(path, offset, "truncated vertex data");
    offset += row.size() * sizeof(float);
    const float* p = row.data();
    std::memcpy(prims.centers.data() + 3 * i, p, 3 * sizeof(float));
    p += 6;  // skip normals
    std::memcpy(prims.sh.data() + static_cast<std::size_t>(coeffs) * i, p,
                coeffs * sizeof(float));
    p += coeffs;
    prims.opacity_logits[i] = *p++;
    std::memcpy(prims.log_scales.data() + 3 * i, p, 3 * sizeof(float));
    p += 3;
    std::memcpy(prims.rotations.data() + 4 * i, p, 4 * sizeof(float));
  }
  prims.validate();
  return prims;
}

}  // namespace splatfuse
