#pragma once

#include <stdexcept>
#include <string>

namespace chemo {

// Error taxonomy; the CLI maps each class to a distinct exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chromosome/schedule shape does not match the instance.
struct DimensionError : Error {
    using Error::Error;
};

// Malformed input file (instance, experiment spec, results).
struct ParseError : Error {
    using Error::Error;
};

// A domain invariant failed validation.
struct InvariantError : Error {
    using Error::Error;
};

// NaN/overflow detected in model arithmetic.
struct NumericError : Error {
    using Error::Error;
};

// Bad optimizer/experiment configuration or a failed experiment.
struct ConfigError : Error {
    using Error::Error;
};

// Bayesian network structure violated (cycle found).
struct StructureError : Error {
    using Error::Error;
};

}  // namespace chemo
