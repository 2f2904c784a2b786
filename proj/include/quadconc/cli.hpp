#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace quadconc {

// Parse "geom:start:stop:count" or "lin:start:stop:count" into a strictly
// increasing grid. The stop endpoint is hit exactly; count = 1 requires
// start == stop.
std::vector<double> parse_grid(const std::string& text);

// FNV-1a 64-bit digest of a file's bytes, as 16 lowercase hex digits.
// Throws ValidationError when the file cannot be read.
std::string fnv1a64_file_hex(const std::string& path);

// Run one subcommand; `args` excludes the program name. Reports go to `out`
// (or the --out path), diagnostics to `err`. Returns 0 on success, 2 on
// invalid input, 3 on numerical failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quadconc
