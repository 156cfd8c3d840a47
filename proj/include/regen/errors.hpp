#pragma once

#include <stdexcept>
#include <string>

namespace regen {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters or usage (bad n/k, malformed field spec, shape mismatch).
class ParamError : public Error {
public:
    using Error::Error;
};

// Mixing elements of two different fields in one operation.
class FieldMismatchError : public ParamError {
public:
    using ParamError::ParamError;
};

// Reading or writing cluster state on disk failed.
class IoError : public Error {
public:
    using Error::Error;
};

// Stored symbols contradict each other or the code's own structure.
class CorruptionError : public Error {
public:
    using Error::Error;
};

// Fewer than k nodes remain; part of the data is permanently lost.
class DataLossError : public Error {
public:
    using Error::Error;
};

// Enough nodes survive to read the data but not enough to run a repair.
class RepairImpossibleError : public Error {
public:
    using Error::Error;
};

}  // namespace regen
