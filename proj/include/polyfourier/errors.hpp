#pragma once

#include <stdexcept>

namespace pf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geometry
struct DegenerateInput : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };

// Transform evaluation
struct Overflow : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };

// Quadrics and parameterizations
struct UnsupportedQuadric : Error { using Error::Error; };
struct EmptyQuadric : Error { using Error::Error; };
struct PointQuadric : Error { using Error::Error; };
struct OnSigma1Zero : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };
struct InternalInconsistency : Error { using Error::Error; };
struct InvalidFixture : Error { using Error::Error; };

}  // namespace pf
