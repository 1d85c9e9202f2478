#pragma once

#include "hybridreg/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace hybridreg {

enum class CloudFormat {
  PlyBinary,  // binary_little_endian, float64 properties
  PlyAscii,
  Xyz,        // whitespace separated "x y z" or "x y z nx ny nz" per line
};

// .ply -> PlyBinary, .xyz/.txt/.pts -> Xyz. Throws hybridreg::Error otherwise.
CloudFormat format_from_path(const std::filesystem::path& path);

// Loading accepts both PLY encodings whenever the format is a PLY variant.
// Errors are reported as ParseError with the offending line or byte offset; no
// partially-read cloud is ever returned.
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud load_cloud(const std::filesystem::path& path);
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format);

PointCloud read_ply(std::istream& in);
PointCloud read_xyz(std::istream& in);
void write_ply(const PointCloud& cloud, std::ostream& out, bool binary);
void write_xyz(const PointCloud& cloud, std::ostream& out);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace hybridreg
