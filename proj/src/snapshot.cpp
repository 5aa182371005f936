#include "fbs/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "fbs/errors.hpp"

namespace fbs {

namespace {

constexpr char kMagic[4] = {'F', 'B', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is, const std::filesystem::path& path) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("snapshot truncated: " + path.string());
  return v;
}

void write_header(std::ofstream& os, const SpectralGrid& g, bool real_flag,
                  bool solenoidal, std::uint32_t components) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.modes_per_dim()));
  put<double>(os, g.box_length());
  put<std::uint8_t>(os, real_flag ? 1 : 0);
  put<std::uint8_t>(os, solenoidal ? 1 : 0);
  put<std::uint16_t>(os, 0);
  put<std::uint32_t>(os, components);
}

void write_coeffs(std::ofstream& os, const std::vector<Complex>& coeffs) {
  for (const auto& c : coeffs) {
    put<double>(os, c.real());
    put<double>(os, c.imag());
  }
}

struct RawSnapshot {
  SnapshotHeader header;
  std::vector<std::vector<Complex>> components;
};

RawSnapshot read_raw(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open snapshot: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a field snapshot (bad magic): " + path.string());
  const auto version = get<std::uint32_t>(is, path);
  if (version != kVersion)
    throw IoError("unsupported snapshot version " + std::to_string(version) +
                  ": " + path.string());
  RawSnapshot out;
  out.header.n = static_cast<int>(get<std::uint32_t>(is, path));
  out.header.N = static_cast<int>(get<std::uint32_t>(is, path));
  out.header.L = get<double>(is, path);
  out.header.real_valued = get<std::uint8_t>(is, path) != 0;
  out.header.solenoidal = get<std::uint8_t>(is, path) != 0;
  (void)get<std::uint16_t>(is, path);
  out.header.component_count = static_cast<int>(get<std::uint32_t>(is, path));

  std::size_t size = 1;
  for (int d = 0; d < out.header.n; ++d)
    size *= static_cast<std::size_t>(out.header.N);
  out.components.resize(static_cast<std::size_t>(out.header.component_count));
  for (auto& comp : out.components) {
    comp.resize(size);
    for (auto& c : comp) {
      const double re = get<double>(is, path);
      const double im = get<double>(is, path);
      c = Complex(re, im);
    }
  }
  return out;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write snapshot: " + path.string());
  write_header(os, *f.grid, f.real_valued, false, 1);
  write_coeffs(os, f.coeffs);
  if (!os) throw IoError("snapshot write failed: " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const VectorField& u) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write snapshot: " + path.string());
  write_header(os, *u.grid(), u.real_valued(), u.solenoidal,
               static_cast<std::uint32_t>(u.comp.size()));
  for (const auto& c : u.comp) write_coeffs(os, c.coeffs);
  if (!os) throw IoError("snapshot write failed: " + path.string());
}

SnapshotHeader read_snapshot_header(const std::filesystem::path& path) {
  return read_raw(path).header;
}

ScalarField read_scalar_snapshot(const std::filesystem::path& path) {
  RawSnapshot raw = read_raw(path);
  if (raw.header.component_count != 1)
    throw IoError("expected a scalar snapshot (1 component), got " +
                  std::to_string(raw.header.component_count) + ": " +
                  path.string());
  ScalarField f(make_grid(raw.header.n, raw.header.N, raw.header.L),
                raw.header.real_valued);
  f.coeffs = std::move(raw.components[0]);
  return f;
}

VectorField read_vector_snapshot(const std::filesystem::path& path) {
  RawSnapshot raw = read_raw(path);
  if (raw.header.component_count != raw.header.n)
    throw IoError("expected a vector snapshot (n components): " +
                  path.string());
  VectorField u(make_grid(raw.header.n, raw.header.N, raw.header.L),
                raw.header.real_valued);
  for (std::size_t d = 0; d < raw.components.size(); ++d)
    u.comp[d].coeffs = std::move(raw.components[d]);
  u.solenoidal = raw.header.solenoidal;
  return u;
}

}  // namespace fbs
