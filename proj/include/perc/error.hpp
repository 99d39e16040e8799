#pragma once

#include <stdexcept>
#include <string>

namespace perc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: out-of-range parameters, malformed presentations, bad vertex ids.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// An exhaustive computation would exceed its configured cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

// The patch is too small for the requested object; retry with a larger radius.
class PatchTooSmall : public Error {
public:
    using Error::Error;
};

// Internal consistency failure, e.g. a cycle basis of the wrong rank.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Reads PERC_CAP if set, else returns fallback.
std::size_t enumeration_cap(std::size_t fallback);

}  // namespace perc
