#pragma once

#include <stdexcept>
#include <string>

namespace morseq {

/// Base class for all morseq errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// d_out * d_in != 0: the pair does not present a chain group.
struct CompositionNonzero : Error {
    using Error::Error;
};

struct NotAComplex : Error {
    using Error::Error;
};

struct NotAChainMap : Error {
    using Error::Error;
};

struct NotAnInvolution : Error {
    using Error::Error;
};

struct NotClosedUnderDifferential : Error {
    using Error::Error;
};

struct InvalidInstance : Error {
    using Error::Error;
};

struct GradingMismatch : Error {
    using Error::Error;
};

struct UnknownName : Error {
    using Error::Error;
};

struct UnknownGenerator : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct MalformedChain : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

struct Mismatch : Error {
    using Error::Error;
};

}  // namespace morseq
