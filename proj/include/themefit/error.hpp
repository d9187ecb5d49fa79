#ifndef THEMEFIT_ERROR_HPP_
#define THEMEFIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace themefit {

/// Bad caller-supplied value: violated precondition, shape mismatch, unknown id.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed input text (JSON syntax, wrong field type). Message carries
/// "path:line:" where applicable.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally valid input that breaks a corpus invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unusable run configuration (empty train split, out-of-range hyperparameter).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The sampler cannot produce a conforming sample from the available pools.
struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace themefit

#endif  // THEMEFIT_ERROR_HPP_
