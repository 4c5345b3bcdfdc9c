#pragma once

#include <stdexcept>
#include <string>

namespace qtors {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files, invalid algebra descriptions, unresolved names.
// CLI exit code 2.
struct InputError : Error {
    using Error::Error;
};

// A configured enumeration bound was exceeded (submodule enumeration,
// extension enumeration, subset enumeration).
struct BoundError : Error {
    using Error::Error;
};

// Internal consistency failure: a theorem the engine relies on did not hold
// on concrete data, or a completeness assumption broke.  CLI exit code 1.
struct CheckError : Error {
    using Error::Error;
};

}  // namespace qtors
