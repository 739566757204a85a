#ifndef VMCLAB_IO_HPP
#define VMCLAB_IO_HPP

#include <string>

#include "vmclab/grid.hpp"

namespace vmclab {

// Masks go to NetPBM P4 (3D masks stack the z-slices vertically); fields go to
// flat little-endian float64 arrays. Both carry a JSON sidecar "<path>.json"
// with {n, counts, h, origin} so files round-trip without external context.

void save_mask(const BinaryMask& m, const std::string& path);
BinaryMask load_mask(const std::string& path);

void save_field(const ScalarField& f, const std::string& path);
ScalarField load_field(const std::string& path);

/// Per-cell dump: x,y[,z],value rows with a header line.
void save_field_csv(const ScalarField& f, const std::string& path);
void save_mask_csv(const BinaryMask& m, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace vmclab

#endif
