#pragma once

#include <stdexcept>

namespace corrlab {

/// Conditioning on an event of (numerically) zero probability.
class NullEventError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace corrlab
