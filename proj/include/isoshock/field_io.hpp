// Snapshot dumps of a ConservedField.
//
// Binary layout (little-endian): magic "ISOF", uint32 version (1), uint32 nx,
// uint32 ny, float64 xmin, xmax, ymin, ymax, t, then nx*ny records of four
// float64 (rho, rho u, rho v, rho phi) in row-major order (j outer, i inner).
#pragma once

#include <string>

#include "isoshock/euler2d.hpp"

namespace isoshock {

void write_field_binary(const std::string& path, const ConservedField& field);
ConservedField read_field_binary(const std::string& path);

/// Same data as text: a header line with nx, ny, extents and t, then one
/// "i,j,x,y,rho,rho_u,rho_v,rho_phi" line per cell in the binary order.
void write_field_csv(const std::string& path, const ConservedField& field);

}  // namespace isoshock
