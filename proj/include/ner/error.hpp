#pragma once

#include <stdexcept>
#include <string>

namespace ner {

/// Malformed input: bad tag strings, broken column files, invalid spans.
/// The message carries the location (file:line or index) when known.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Document sampling cannot satisfy the target under the active caps.
/// The message lists the binding constraints.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ner
