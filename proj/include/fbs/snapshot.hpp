#pragma once

#include <filesystem>
#include <string>

#include "fbs/field.hpp"

namespace fbs {

// Field snapshot container, binary, little-endian:
//   magic "FBSF" | u32 version=1 | u32 n | u32 N | f64 L
//   | u8 real_flag | u8 solenoidal_flag | u16 reserved=0
//   | u32 component_count
//   | component_count * N^n complex coefficients as (f64 re, f64 im),
//     components in order, lattice row-major (grid mode ordering).
// The layout is stable; readers reject unknown magic/version.

void write_snapshot(const std::filesystem::path& path, const ScalarField& f);
void write_snapshot(const std::filesystem::path& path, const VectorField& u);

struct SnapshotHeader {
  int n = 0;
  int N = 0;
  double L = 0.0;
  bool real_valued = false;
  bool solenoidal = false;
  int component_count = 0;
};

SnapshotHeader read_snapshot_header(const std::filesystem::path& path);
ScalarField read_scalar_snapshot(const std::filesystem::path& path);
VectorField read_vector_snapshot(const std::filesystem::path& path);

}  // namespace fbs
