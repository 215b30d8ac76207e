#pragma once

#include <stdexcept>
#include <string>

namespace geoswarm {

/// Base of every error raised by the library. `numerical()` separates
/// numerical failures (CLI exit 2) from input problems (CLI exit 1).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, bool numerical = true)
        : std::runtime_error(what), numerical_(numerical) {}

    bool numerical() const noexcept { return numerical_; }

private:
    bool numerical_;
};

#define GEOSWARM_DEFINE_ERROR(Name, numeric)                                   \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name ": " + what, numeric) {} \
    }

GEOSWARM_DEFINE_ERROR(NonFiniteState, true);
GEOSWARM_DEFINE_ERROR(DegenerateVelocity, true);
GEOSWARM_DEFINE_ERROR(IndexOutOfRange, false);
GEOSWARM_DEFINE_ERROR(TooFewAgents, false);
GEOSWARM_DEFINE_ERROR(ConjugatePointFlag, true);
GEOSWARM_DEFINE_ERROR(EmptyInput, false);
GEOSWARM_DEFINE_ERROR(RankDeficient, true);
GEOSWARM_DEFINE_ERROR(DimensionMismatch, false);
GEOSWARM_DEFINE_ERROR(NumericalBreakdown, true);
GEOSWARM_DEFINE_ERROR(ParseError, false);
GEOSWARM_DEFINE_ERROR(ValidationError, false);
GEOSWARM_DEFINE_ERROR(InvalidArgument, false);

#undef GEOSWARM_DEFINE_ERROR

}  // namespace geoswarm
