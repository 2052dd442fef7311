#ifndef PEF_ERRORS_HPP
#define PEF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pef {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ErosionTooLarge : Error {
    using Error::Error;
};
struct NonZeroMeanInput : Error {
    using Error::Error;
};
struct DensityInfeasible : Error {
    using Error::Error;
};
struct InvalidPinIndex : Error {
    using Error::Error;
};
struct InfeasibleBox : Error {
    using Error::Error;
};
struct NonFiniteObjective : Error {
    using Error::Error;
};
struct InsufficientData : Error {
    using Error::Error;
};
struct NegativeDensity : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

} // namespace pef

#endif
