#pragma once

#include <stdexcept>
#include <string>

namespace cmm {

// Malformed textual input (treebank or sentence files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration values (layer counts, thresholds, formats).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent corpus or parameter contents.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model file framing problems: bad version, checksum, truncation.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A lattice without a scorable complete path.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cmm
