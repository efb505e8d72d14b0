#pragma once

#include <string>
#include <vector>

#include "mrl/sequence.hpp"

namespace mrl {

// Load a target pattern. Two formats are auto-detected:
//  - ASCII grid: one row per line, characters '0'/'1' (spaces ignored),
//    first line is the top row;
//  - PGM P2: grayscale mapped to [0, 1] by maxval.
// Malformed input raises IoError naming the file, line, and column. The
// returned grid has the given pitch and is centered at (0, 0); callers
// reposition it as needed.
PatternGrid load_pattern(const std::string& path, double pitch_nm);

// Parse the same formats from memory; source_name labels error messages.
PatternGrid parse_pattern_text(const std::string& text,
                               const std::string& source_name, double pitch_nm);

// Write a 16-bit ASCII PGM (P2, maxval 65535). rows_top_first holds
// width*height values scanned left-to-right from the top row; values are
// scaled by the array maximum (all-zero data writes all zeros).
void write_pgm16(const std::string& path, int width, int height,
                 const std::vector<double>& rows_top_first);

// Whole-file text helpers (IoError on failure).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mrl
