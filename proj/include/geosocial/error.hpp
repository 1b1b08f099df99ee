#pragma once

#include <stdexcept>
#include <string>

namespace geosocial {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input files that cannot be opened or decoded as a whole.
class IngestError : public Error {
public:
    using Error::Error;
};

/// Malformed administrative hierarchy or alias table.
class BuildError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its domain (empty corpus, zero variance, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid pipeline configuration. Maps to exit status 2 in the CLI.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace geosocial
