#pragma once

#include <stdexcept>
#include <string>

namespace qet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid input or violated precondition; CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A computed quantity failed its tolerance contract; CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

// File system failure with path context; CLI exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qet
