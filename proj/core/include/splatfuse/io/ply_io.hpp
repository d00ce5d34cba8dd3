// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "splatfuse/gaussians.hpp"

namespace splatfuse {

// Binary little-endian PLY with per-vertex float properties in fixed order:
// x,y,z, nx,ny,nz (zeros), f_dc_0..2, [f_rest_0..8 for SH degree 1],
// opacity (inverse-sigmoid logit), scale_0..2 (log meters), rot_0..3 (w,x,y,z).
// The stored encodings match the in-memory ones, so round trips are bit-exact.
void export_ply(const GaussianPrimitiveSet& prims, const std::filesystem::path& path);
GaussianPrimitiveSet import_ply(const std::filesystem::path& path);

}  // namespace splatfuse
