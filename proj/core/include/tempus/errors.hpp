#pragma once

#include <stdexcept>
#include <string>

namespace tempus {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Integration blew up; carries the last time at which the state was finite.
struct NonFinite : Error {
    double last_valid_time;
    NonFinite(const std::string& msg, double t) : Error(msg), last_valid_time(t) {}
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct WindowTooShort : Error {
    using Error::Error;
};

struct SingularState : Error {
    using Error::Error;
};

struct NoPhysicalRoot : Error {
    using Error::Error;
};

struct ConstraintDrift : Error {
    double max_residual;
    ConstraintDrift(const std::string& msg, double r) : Error(msg), max_residual(r) {}
};

struct InsufficientHits : Error {
    using Error::Error;
};

struct MeshTooCoarse : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct NoLowerPole : Error {
    using Error::Error;
};

struct WindowEmpty : Error {
    using Error::Error;
};

struct EmptyShell : Error {
    using Error::Error;
};

struct WeightMismatch : Error {
    using Error::Error;
};

struct FlowEscapedGrid : Error {
    using Error::Error;
};

struct UnknownNode : Error {
    using Error::Error;
};

struct NoUniqueSource : Error {
    using Error::Error;
};

struct PathViolatesOrder : Error {
    using Error::Error;
};

struct TooLargeForExact : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

}  // namespace tempus
