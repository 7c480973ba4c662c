#pragma once

#include <stdexcept>
#include <string>

namespace dyncoup {

/// Raised for anything the user can fix: unreadable files, malformed rows,
/// out-of-range flags. The CLI maps it to exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dyncoup
