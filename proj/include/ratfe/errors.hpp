#pragma once
// Error types thrown across the library. Each failure mode gets its own type
// so callers (and the CLI exit-code mapping) can tell them apart.

#include <stdexcept>
#include <string>

namespace ratfe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RATFE_DEFINE_ERROR(Name, Base)          \
    struct Name : Base {                        \
        using Base::Base;                       \
    }

// exact arithmetic
RATFE_DEFINE_ERROR(ZeroDenominator, Error);
RATFE_DEFINE_ERROR(ScaleInfiniteByNonpositive, Error);
RATFE_DEFINE_ERROR(InfiniteValue, Error);
RATFE_DEFINE_ERROR(ParseError, Error);

// rational functions and quadrature
RATFE_DEFINE_ERROR(NegativeIndex, Error);
RATFE_DEFINE_ERROR(SingularEvaluation, Error);
RATFE_DEFINE_ERROR(IndexNotFinite, Error);
RATFE_DEFINE_ERROR(InfiniteTerm, Error);

// meshes and elements
RATFE_DEFINE_ERROR(DegenerateBarycenter, Error);
RATFE_DEFINE_ERROR(DegenerateElement, Error);
RATFE_DEFINE_ERROR(MeshFormatError, Error);
RATFE_DEFINE_ERROR(SingularVandermonde, Error);
RATFE_DEFINE_ERROR(IndexOutOfRange, Error);
RATFE_DEFINE_ERROR(ZeroBubbleNormalDerivative, Error);
RATFE_DEFINE_ERROR(ZeroBubbleTangentialTrace, Error);

// solvers: all map to exit code 3 in the CLI
struct SolverError : Error {
    using Error::Error;
};
RATFE_DEFINE_ERROR(NotPositiveDefinite, SolverError);
RATFE_DEFINE_ERROR(NoConvergence, SolverError);
RATFE_DEFINE_ERROR(SingularSystem, SolverError);

// output and configuration
RATFE_DEFINE_ERROR(EmptySeries, Error);
RATFE_DEFINE_ERROR(ConfigError, Error);

#undef RATFE_DEFINE_ERROR

}  // namespace ratfe
