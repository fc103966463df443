#pragma once

#include <string>

namespace qomsync {

// Shortest decimal string that round-trips to the same double (std::to_chars).
// Used for every number that lands in a CSV or config file so that output is
// byte-identical across runs and worker counts.
std::string format_double(double x);

// Write `content` to `path` via a sibling temp file + rename, so readers never
// observe a half-written file and a crashed run leaves no corrupt output.
void write_text_atomic(const std::string& path, const std::string& content);

// Slurp a whole file; throws std::runtime_error with the path on failure.
std::string read_text_file(const std::string& path);

}  // namespace qomsync
