#pragma once

#include <stdexcept>
#include <string>

namespace spectra_cert {

// Invalid inputs: bad files, malformed parameters, contract violations.
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failures: gap collapse, PSD violations, solver breakdown.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectra_cert
