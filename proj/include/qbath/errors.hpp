// errors.hpp — Exception types shared by every qbath module

#pragma once

#include <stdexcept>
#include <string>

namespace qbath {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a formula (negative frequency, overdamped
// request for an underdamped-only closed form, free particle where a finite
// variance is needed, ...).
struct DomainError : Error {
    using Error::Error;
};

// Invalid run configuration: bad keys, unparsable values, violated invariants
// detected before any computation starts.
struct ConfigError : Error {
    using Error::Error;
};

// Quadrature/eigensolver non-convergence, loss of definiteness, truncation
// budget overflow and tolerance violations.
struct NumericalError : Error {
    using Error::Error;
};

} // namespace qbath
