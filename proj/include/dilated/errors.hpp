#pragma once

#include <stdexcept>
#include <string>

namespace dilated {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergenceDetected : Error {
    using Error::Error;
};

struct MaxIterationsExceeded : Error {
    using Error::Error;
};

struct IncommensurableLattices : Error {
    using Error::Error;
};

struct NotPsd : Error {
    using Error::Error;
};

struct NotInDomain : Error {
    using Error::Error;
};

struct NoValidPairs : Error {
    using Error::Error;
};

struct UnboundedObservable : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace dilated
