#pragma once

#include <stdexcept>
#include <string>

namespace bglab {

/// A value violates one of its structural invariants (bad labels, malformed
/// map, inconsistent snake). Precondition failures on plain arguments use
/// std::invalid_argument / std::out_of_range instead.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bglab
