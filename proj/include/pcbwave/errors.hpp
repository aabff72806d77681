#pragma once

#include <stdexcept>
#include <string>

namespace pcbwave {

// Base class for all recoverable pipeline errors. The CLI maps these to
// exit code 2; usage errors never reach this hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PCBWAVE_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                              \
    public:                                                                  \
        using Error::Error;                                                  \
    }

// dwt
PCBWAVE_DEFINE_ERROR(OddDimensionError);
PCBWAVE_DEFINE_ERROR(NonDyadicError);

// svm
PCBWAVE_DEFINE_ERROR(DimensionMismatchError);
PCBWAVE_DEFINE_ERROR(SingleClassError);
PCBWAVE_DEFINE_ERROR(ConvergenceError);

// dataset
PCBWAVE_DEFINE_ERROR(IoError);
PCBWAVE_DEFINE_ERROR(MalformedPgmError);
PCBWAVE_DEFINE_ERROR(OutOfRangeError);
PCBWAVE_DEFINE_ERROR(MixedDimensionsError);
PCBWAVE_DEFINE_ERROR(EmptyClassError);
PCBWAVE_DEFINE_ERROR(InfeasibleSplitError);

// eval
PCBWAVE_DEFINE_ERROR(LengthMismatchError);
PCBWAVE_DEFINE_ERROR(EmptyInputError);

#undef PCBWAVE_DEFINE_ERROR

}  // namespace pcbwave
