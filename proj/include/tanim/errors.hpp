#pragma once

#include <stdexcept>
#include <string>

namespace tanim {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape or size of an argument disagrees with what the operation needs.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Requested rank outside [1, mode dimension].
class RankError : public Error {
public:
    using Error::Error;
};

// Parameter value outside its documented domain (not a shape problem).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// A numerical routine failed to converge.
class DecompositionError : public Error {
public:
    using Error::Error;
};

// Target compression ratio unreachable within the accepted band.
class InfeasibleTargetError : public Error {
public:
    using Error::Error;
};

// A stored per-frame transform cannot be applied (singular linear block).
class TransformError : public Error {
public:
    using Error::Error;
};

// Mesh connectivity is inconsistent or references missing vertices.
class TopologyError : public Error {
public:
    using Error::Error;
};

// Byte-level parsing of an asset or container failed.
class FormatError : public Error {
public:
    using Error::Error;
};

// Filesystem access failed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tanim
