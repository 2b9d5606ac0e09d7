#pragma once

#include <array>
#include <string>

#include "sqmf/quat_core.hpp"

namespace sqmf {

// QMAT binary container: "QMAT", u16 version = 1, u32 rows, u32 cols,
// "0123", then the four planes S0..S3 as row-major 64-bit little-endian
// floats.  Round trips are bit-exact.
inline constexpr std::uint16_t kQmatVersion = 1;

QuaternionMatrix read_qmat(const std::string& path);
void write_qmat(const std::string& path, const QuaternionMatrix& q);

// Plain numeric CSV (no header row).
MatrixXd read_csv(const std::string& path);
void write_csv(const std::string& path, const MatrixXd& m, int precision = 17);

// Assemble a quaternion matrix from four per-plane CSV files of identical
// shape, in S0..S3 argument order.  An empty S3 path with zero_missing_s3
// yields an all-zero circular-polarization plane (linear-polarizer data).
QuaternionMatrix read_planes_csv(const std::array<std::string, 4>& paths,
                                 bool zero_missing_s3 = false);

// write-temp-then-rename text write used by the CLI outputs
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace sqmf
