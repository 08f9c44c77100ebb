#pragma once

#include <stdexcept>
#include <string>

namespace polyconsensus {

// Base class for all library errors. The CLI maps input-side errors
// (InvalidInput, Validation, Parse, NotFound, UnsupportedFormat) to exit
// code 2 and computation-side errors to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
public:
    using Error::Error;
};

// Semantic violations in ingested data (bad polygon, duplicate rater, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed files; message carries a JSON-pointer-style path when possible.
class ParseError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

// Sampling outside a field's extent (grid pad too small).
class OutOfDomainError : public Error {
public:
    using Error::Error;
};

// A level-set query on a single-signed field, or an empty majority region.
class NoContourError : public Error {
public:
    using Error::Error;
};

// Raster cell budget exceeded.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

// Synthetic generation could not produce a valid shape within the retry bound.
class GenerationError : public Error {
public:
    using Error::Error;
};

} // namespace polyconsensus
