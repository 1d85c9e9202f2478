#include "hybridreg/cloud_io.hpp"

#include "hybridreg/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

namespace hybridreg {
namespace {

enum class ScalarType { Int8, Uint8, Int16, Uint16, Int32, Uint32, Float32, Float64 };

std::optional<ScalarType> parse_scalar_type(std::string_view s) {
  if (s == "char" || s == "int8") return ScalarType::Int8;
  if (s == "uchar" || s == "uint8") return ScalarType::Uint8;
  if (s == "short" || s == "int16") return ScalarType::Int16;
  if (s == "ushort" || s == "uint16") return ScalarType::Uint16;
  if (s == "int" || s == "int32") return ScalarType::Int32;
  if (s == "uint" || s == "uint32") return ScalarType::Uint32;
  if (s == "float" || s == "float32") return ScalarType::Float32;
  if (s == "double" || s == "float64") return ScalarType::Float64;
  return std::nullopt;
}

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::Int8:
    case ScalarType::Uint8: return 1;
    case ScalarType::Int16:
    case ScalarType::Uint16: return 2;
    case ScalarType::Int32:
    case ScalarType::Uint32:
    case ScalarType::Float32: return 4;
    case ScalarType::Float64: return 8;
  }
  return 0;
}

template <typename T>
T load_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

double decode_scalar(ScalarType t, const unsigned char* p) {
  switch (t) {
    case ScalarType::Int8: return load_le<std::int8_t>(p);
    case ScalarType::Uint8: return load_le<std::uint8_t>(p);
    case ScalarType::Int16: return load_le<std::int16_t>(p);
    case ScalarType::Uint16: return load_le<std::uint16_t>(p);
    case ScalarType::Int32: return load_le<std::int32_t>(p);
    case ScalarType::Uint32: return load_le<std::uint32_t>(p);
    case ScalarType::Float32: return load_le<float>(p);
    case ScalarType::Float64: return load_le<double>(p);
  }
  return 0.0;
}

struct Property {
  std::string name;
  ScalarType type;
};

struct PlyHeader {
  bool binary = false;
  std::size_t vertex_count = 0;
  std::vector<Property> props;
  int x = -1, y = -1, z = -1, nx = -1, ny = -1, nz = -1;
  std::size_t lines = 0;  // header lines consumed
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> parse_number(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

PlyHeader read_header(std::istream& in) {
  PlyHeader h;
  std::string line;
  bool seen_format = false;
  bool in_vertex = false;
  bool vertex_seen = false;
  auto next = [&]() {
    if (!std::getline(in, line)) fail_line(h.lines + 1, "unexpected end of PLY header");
    ++h.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next();
  if (line != "ply") fail_line(h.lines, "missing 'ply' magic");
  for (;;) {
    next();
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2) fail_line(h.lines, "malformed format line");
      if (tok[1] == "ascii") {
        h.binary = false;
      } else if (tok[1] == "binary_little_endian") {
        h.binary = true;
      } else {
        fail_line(h.lines, "unsupported PLY format '" + std::string(tok[1]) + "'");
      }
      seen_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) fail_line(h.lines, "malformed element line");
      if (tok[1] == "vertex") {
        if (vertex_seen) fail_line(h.lines, "duplicate vertex element");
        std::size_t count = 0;
        const auto res = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), count);
        if (res.ec != std::errc() || res.ptr != tok[2].data() + tok[2].size()) {
          fail_line(h.lines, "bad vertex count");
        }
        h.vertex_count = count;
        in_vertex = vertex_seen = true;
      } else {
        // Elements after the vertex block are ignored; elements before it are not supported.
        if (!vertex_seen) fail_line(h.lines, "unsupported element layout: 'vertex' must be the first element");
        in_vertex = false;
      }
    } else if (tok[0] == "property") {
      if (!in_vertex) continue;
      if (tok.size() >= 2 && tok[1] == "list") fail_line(h.lines, "unsupported list property in vertex element");
      if (tok.size() != 3) fail_line(h.lines, "malformed property line");
      const auto type = parse_scalar_type(tok[1]);
      if (!type) fail_line(h.lines, "unknown property type '" + std::string(tok[1]) + "'");
      const int idx = static_cast<int>(h.props.size());
      h.props.push_back({std::string(tok[2]), *type});
      const auto& name = h.props.back().name;
      if (name == "x") h.x = idx;
      if (name == "y") h.y = idx;
      if (name == "z") h.z = idx;
      if (name == "nx") h.nx = idx;
      if (name == "ny") h.ny = idx;
      if (name == "nz") h.nz = idx;
    } else {
      fail_line(h.lines, "unknown header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!seen_format) fail_line(h.lines, "missing format line");
  if (!vertex_seen) fail_line(h.lines, "missing vertex element");
  if (h.x < 0 || h.y < 0 || h.z < 0) fail_line(h.lines, "vertex element lacks x, y, z");
  for (int i : {h.x, h.y, h.z}) {
    const auto t = h.props[static_cast<std::size_t>(i)].type;
    if (t != ScalarType::Float32 && t != ScalarType::Float64) {
      fail_line(h.lines, "x, y, z must be float32 or float64");
    }
  }
  return h;
}

void finalize_normals(PointCloud& cloud) {
  for (auto& n : cloud.normals) {
    const double len = n.norm();
    if (len > 0.0 && std::abs(len - 1.0) > 1e-6) n /= len;
  }
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CloudFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ply") return CloudFormat::PlyBinary;
  if (ext == ".xyz" || ext == ".txt" || ext == ".pts") return CloudFormat::Xyz;
  throw Error("cannot infer point-cloud format from '" + path.string() + "'");
}

PointCloud read_ply(std::istream& in) {
  const PlyHeader h = read_header(in);
  const bool has_normals = h.nx >= 0 && h.ny >= 0 && h.nz >= 0;
  PointCloud cloud;
  cloud.points.resize(h.vertex_count);
  if (has_normals) cloud.normals.resize(h.vertex_count);

  auto store = [&](std::size_t i, const std::vector<double>& vals) {
    cloud.points[i] = Point3(vals[static_cast<std::size_t>(h.x)], vals[static_cast<std::size_t>(h.y)],
                             vals[static_cast<std::size_t>(h.z)]);
    if (has_normals) {
      cloud.normals[i] = Vec3(vals[static_cast<std::size_t>(h.nx)], vals[static_cast<std::size_t>(h.ny)],
                              vals[static_cast<std::size_t>(h.nz)]);
    }
    return cloud.points[i].allFinite() && (!has_normals || cloud.normals[i].allFinite());
  };

  std::vector<double> vals(h.props.size());
  if (h.binary) {
    std::vector<std::size_t> offsets;
    std::size_t stride = 0;
    for (const auto& p : h.props) {
      offsets.push_back(stride);
      stride += scalar_size(p.type);
    }
    const auto body_start = static_cast<std::size_t>(in.tellg());
    std::vector<unsigned char> record(stride);
    for (std::size_t i = 0; i < h.vertex_count; ++i) {
      const std::size_t offset = body_start + i * stride;
      if (!in.read(reinterpret_cast<char*>(record.data()), static_cast<std::streamsize>(stride))) {
        throw ParseError("byte offset " + std::to_string(offset) + ": truncated PLY body (vertex " +
                         std::to_string(i) + " of " + std::to_string(h.vertex_count) + ")");
      }
      for (std::size_t k = 0; k < h.props.size(); ++k) vals[k] = decode_scalar(h.props[k].type, record.data() + offsets[k]);
      if (!store(i, vals)) throw ParseError("byte offset " + std::to_string(offset) + ": non-finite coordinate");
    }
  } else {
    std::string line;
    std::size_t lineno = h.lines;
    std::size_t i = 0;
    while (i < h.vertex_count) {
      if (!std::getline(in, line)) {
        fail_line(lineno + 1, "truncated PLY body (vertex " + std::to_string(i) + " of " +
                                  std::to_string(h.vertex_count) + ")");
      }
      ++lineno;
      const auto tok = split_ws(line);
      if (tok.empty()) continue;
      if (tok.size() < h.props.size()) fail_line(lineno, "expected " + std::to_string(h.props.size()) + " values");
      for (std::size_t k = 0; k < h.props.size(); ++k) {
        const auto v = parse_number(tok[k]);
        if (!v) fail_line(lineno, "invalid number '" + std::string(tok[k]) + "'");
        vals[k] = *v;
      }
      if (!store(i, vals)) fail_line(lineno, "non-finite coordinate");
      ++i;
    }
  }
  finalize_normals(cloud);
  return cloud;
}

PointCloud read_xyz(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  int columns = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 3 && tok.size() != 6) fail_line(lineno, "expected 3 or 6 columns");
    if (columns < 0) columns = static_cast<int>(tok.size());
    if (static_cast<int>(tok.size()) != columns) fail_line(lineno, "inconsistent column count");
    std::array<double, 6> v{};
    for (std::size_t k = 0; k < tok.size(); ++k) {
      const auto x = parse_number(tok[k]);
      if (!x) fail_line(lineno, "invalid number '" + std::string(tok[k]) + "'");
      if (!std::isfinite(*x)) fail_line(lineno, "non-finite coordinate");
      v[k] = *x;
    }
    cloud.points.emplace_back(v[0], v[1], v[2]);
    if (columns == 6) cloud.normals.emplace_back(v[3], v[4], v[5]);
  }
  finalize_normals(cloud);
  return cloud;
}

void write_ply(const PointCloud& cloud, std::ostream& out, bool binary) {
  const bool normals = cloud.has_normals();
  out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  for (const char* n : {"x", "y", "z"}) out << "property double " << n << '\n';
  if (normals) {
    for (const char* n : {"nx", "ny", "nz"}) out << "property double " << n << '\n';
  }
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::array<double, 6> v{cloud.points[i].x(), cloud.points[i].y(), cloud.points[i].z(), 0, 0, 0};
    const std::size_t count = normals ? 6 : 3;
    if (normals) {
      v[3] = cloud.normals[i].x();
      v[4] = cloud.normals[i].y();
      v[5] = cloud.normals[i].z();
    }
    if (binary) {
      for (std::size_t k = 0; k < count; ++k) {
        double x = v[k];
        if constexpr (std::endian::native == std::endian::big) {
          auto* b = reinterpret_cast<unsigned char*>(&x);
          std::reverse(b, b + sizeof(double));
        }
        out.write(reinterpret_cast<const char*>(&x), sizeof(double));
      }
    } else {
      for (std::size_t k = 0; k < count; ++k) out << (k ? " " : "") << format_double(v[k]);
      out << '\n';
    }
  }
}

void write_xyz(const PointCloud& cloud, std::ostream& out) {
  const bool normals = cloud.has_normals();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z());
    if (normals) {
      const auto& n = cloud.normals[i];
      out << ' ' << format_double(n.x()) << ' ' << format_double(n.y()) << ' ' << format_double(n.z());
    }
    out << '\n';
  }
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return format == CloudFormat::Xyz ? read_xyz(in) : read_ply(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

PointCloud load_cloud(const std::filesystem::path& path) { return load_cloud(path, format_from_path(path)); }

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  if (format == CloudFormat::Xyz) {
    write_xyz(cloud, out);
  } else {
    write_ply(cloud, out, format == CloudFormat::PlyBinary);
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace hybridreg
