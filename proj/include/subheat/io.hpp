#ifndef SUBHEAT_IO_HPP
#define SUBHEAT_IO_HPP

#include "subheat/errors.hpp"
#include "subheat/grid.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

namespace subheat {

// Flat binary field snapshot: magic "SHF1", u32 dim, u32 dtype tag (8 =
// float64), then per axis (u64 points, f64 lower, f64 upper), then values
// row-major.
inline void write_field_binary(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out.write("SHF1", 4);
  const std::uint32_t dim = static_cast<std::uint32_t>(f.grid.dim());
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  const std::uint32_t dtype = 8;  // bytes per value, IEEE double
  out.write(reinterpret_cast<const char*>(&dtype), sizeof dtype);
  for (int d = 0; d < f.grid.dim(); ++d) {
    const std::uint64_t p = static_cast<std::uint64_t>(f.grid.points[d]);
    out.write(reinterpret_cast<const char*>(&p), sizeof p);
    out.write(reinterpret_cast<const char*>(&f.grid.lower[d]), sizeof(double));
    out.write(reinterpret_cast<const char*>(&f.grid.upper[d]), sizeof(double));
  }
  out.write(reinterpret_cast<const char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
}

inline Field read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "SHF1", 4) != 0) throw ValidationError(path + ": not a field snapshot");
  std::uint32_t dim = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  std::uint32_t dtype = 0;
  in.read(reinterpret_cast<char*>(&dtype), sizeof dtype);
  if (dtype != 8) throw ValidationError(path + ": unsupported value dtype");
  std::vector<double> lo(dim), up(dim);
  std::vector<int> pts(dim);
  for (std::uint32_t d = 0; d < dim; ++d) {
    std::uint64_t p = 0;
    in.read(reinterpret_cast<char*>(&p), sizeof p);
    pts[d] = static_cast<int>(p);
    in.read(reinterpret_cast<char*>(&lo[d]), sizeof(double));
    in.read(reinterpret_cast<char*>(&up[d]), sizeof(double));
  }
  Field f(GridSpec(lo, up, pts));
  in.read(reinterpret_cast<char*>(f.data()),
          static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!in) throw ValidationError(path + ": truncated field snapshot");
  return f;
}

/// CSV export: one row per node, coordinates then value.
inline void write_field_csv(const Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  for (int d = 0; d < f.grid.dim(); ++d) out << "x" << (d + 1) << ",";
  out << "value\n";
  char buf[64];
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto x = f.grid.node_coords(i);
    for (double c : x) {
      std::snprintf(buf, sizeof buf, "%.12g,", c);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g\n", f.values[i]);
    out << buf;
  }
}

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace subheat

#endif
