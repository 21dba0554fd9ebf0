#ifndef SDP_IO_HPP
#define SDP_IO_HPP

#include <string>

#include <Eigen/Core>

#include "sdp/cube.hpp"

namespace sdp {

// Cube container: magic "HSC1", three u32 little-endian dims (B, H, W),
// then B*H*W IEEE-754 binary32 little-endian values, band-major row-major.
void save_cube(const HyperCube& cube, const std::string& path);
HyperCube load_cube(const std::string& path);

// Headerless CSV of decimal floats, one matrix row per line.
void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd load_matrix_csv(const std::string& path);

// SpectrumBatch CSV: one spectrum per line, comma-separated, no header.
void save_spectra_csv(const SpectrumBatch& batch, const std::string& path);
SpectrumBatch load_spectra_csv(const std::string& path);

} // namespace sdp

#endif
