#pragma once

#include <stdexcept>

namespace streetperc {

// Error classes map 1:1 onto CLI exit codes (see tools/): parameter -> 2,
// geometry -> 3, degenerate fit -> 4. IntegrityError indicates an internal
// consistency violation (corrupt cross-references) and exits as generic 1.

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrityError : std::logic_error {
  using std::logic_error::logic_error;
};

struct DegenerateFitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace streetperc
