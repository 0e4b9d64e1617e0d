#pragma once

#include <string>

#include "ckf/types.hpp"

namespace ckf {

// Binary PGM (P5), maxval <= 255. Comments and arbitrary whitespace in the
// header are accepted. Any nonzero value reads as foreground.
// Throws io_error / bad_format with the offending path in the message.
Mask read_pgm(const std::string& path);

// Writes foreground as 255, background as 0, maxval 255. Output is
// byte-identical across runs for equal masks.
void write_pgm(const std::string& path, const Mask& mask);

}  // namespace ckf
