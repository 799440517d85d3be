#ifndef NOONSIM_ERRORS_HPP
#define NOONSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace noonsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptySectorError : public Error {
public:
    using Error::Error;
};

class InvalidLabelError : public Error {
public:
    using Error::Error;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class PulseWindowError : public Error {
public:
    using Error::Error;
};

class PropagationError : public Error {
public:
    PropagationError(const std::string& what, double t) : Error(what), time(t) {}
    double time;
};

class NoDarkStateError : public Error {
public:
    using Error::Error;
};

class BasisMergeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}

#endif
