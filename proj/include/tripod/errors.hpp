#pragma once

#include <stdexcept>
#include <string>

namespace tripod {

// Base type for all library failures so callers can catch one thing.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear system has no reliable solution (pivot below the relative threshold).
struct singular_system : error {
  using error::error;
};

// Relaxation run reached t_end without meeting the convergence threshold.
struct non_convergence : error {
  using error::error;
};

// Operation asked of a beam family that does not define it.
struct wrong_family : error {
  using error::error;
};

// Ray integration left the configured transverse bounds.
struct ray_escaped : error {
  using error::error;
};

// Config file is not syntactically readable.
struct parse_error : error {
  using error::error;
};

// Config file parsed but violates a documented constraint.
struct validation_error : error {
  using error::error;
};

}
