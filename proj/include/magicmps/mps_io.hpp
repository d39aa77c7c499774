#pragma once

#include <string>

#include "magicmps/mps.hpp"

namespace magicmps {

// Container format (little endian):
//   bytes 0..3   "MMPS"
//   u32          format version (1)
//   u32          number of sites
//   per site     u32 left bond, u32 physical dim, u32 right bond
//   payload      all site amplitudes in order, each as two f64 (re, im)
// A JSON sidecar at <path>.json carries the same metadata plus the
// orthogonality center. Round-trips are bit exact.

void save_mps(const std::string& path, const MatrixProductState& psi);
MatrixProductState load_mps(const std::string& path);

}  // namespace magicmps
