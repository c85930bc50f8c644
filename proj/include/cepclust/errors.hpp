#pragma once

#include <stdexcept>
#include <string>

namespace cepclust {

// Base of every error raised by the library. Callers that only need to know
// "the data was bad" catch this; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidLengthError : public Error {
public:
    using Error::Error;
};

class IncompatibleLengthError : public Error {
public:
    using Error::Error;
};

class AliasingError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class InfeasibleBandError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

class UnboundedNormError : public Error {
public:
    using Error::Error;
};

class DiscretizationError : public Error {
public:
    using Error::Error;
};

class IncompatibleModelError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Raised by pairwise_matrix when a single (i, j) evaluation fails.
class MeasureError : public Error {
public:
    MeasureError(std::size_t i, std::size_t j, const std::string& what)
        : Error("measure failed for pair (" + std::to_string(i) + ", " + std::to_string(j) +
                "): " + what),
          row(i),
          col(j) {}

    std::size_t row;
    std::size_t col;
};

}  // namespace cepclust
