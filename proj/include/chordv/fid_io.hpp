#pragma once

#include "chordv/signal_model.hpp"

#include <iosfwd>
#include <string>

namespace chordv {

/// FID CSV files:
///
///   # dt=0.001
///   index,real,imag
///   0,1,0
///   ...
///
/// Comment lines start with '#'; the `# dt=<seconds>` line is required and
/// may appear anywhere before the data. Indices must run 0..N-1 in order.
/// Numbers are read and written with std::from_chars / std::to_chars, so
/// the format ignores the C and C++ locales and round-trips doubles exactly.
Fid read_fid(std::istream& in);
Fid read_fid(const std::string& path);

void write_fid(const Fid& fid, std::ostream& out);
void write_fid(const Fid& fid, const std::string& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace chordv
