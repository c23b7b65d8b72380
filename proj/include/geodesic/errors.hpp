#pragma once

#include <stdexcept>
#include <string>

namespace geodesic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHyperbolic : Error {
    using Error::Error;
};

struct RelatorNotFound : Error {
    using Error::Error;
};

struct IdentityWord : Error {
    using Error::Error;
};

struct CapacityExceeded : Error {
    using Error::Error;
};

struct InvariantClash : Error {
    using Error::Error;
};

struct FormatVersionMismatch : Error {
    using Error::Error;
};

struct CorruptRow : Error {
    CorruptRow(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct DegenerateSample : Error {
    using Error::Error;
};

struct NonPositiveNorm : Error {
    using Error::Error;
};

}  // namespace geodesic
