#pragma once

#include <string>
#include <vector>

#include "f3/grids.hpp"

namespace f3 {

/// Flat binary field blob. 16-byte header: magic "F3FLD", version u8,
/// rank u8, flags u8 (bit 0: complex), 8 reserved zero bytes; then rank
/// u32 little-endian axis counts; then 64-bit IEEE-754 little-endian
/// payload, interleaved re/im for complex fields.
void write_field(const std::string& path, const Field& f, const std::vector<int>& counts);
Field read_field(const std::string& path, std::vector<int>* counts_out = nullptr);

void write_real_field(const std::string& path, const RealField& f,
                      const std::vector<int>& counts);
RealField read_real_field(const std::string& path, std::vector<int>* counts_out = nullptr);

/// Deterministic float formatting shared by all CSV writers.
std::string format_double(double v);

}  // namespace f3
