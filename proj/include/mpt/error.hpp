#pragma once

#include <stdexcept>
#include <string>

namespace mpt {

// Input or configuration violates a documented constraint.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A statistic is undefined for the supplied data (e.g. a constant series).
class DegenerateDataError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The analytic correlation oracle has no closed form for the requested variable.
class UnsupportedVariableError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mpt
