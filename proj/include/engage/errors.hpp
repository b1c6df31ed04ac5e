#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace engage {

/// Base of every error thrown by the engine.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A telemetry value is non-finite, negative, or otherwise out of range.
class InvalidSignalError : public Error
{
public:
    using Error::Error;
};

/// Timestamps went backwards or repeated.
class OrderingError : public Error
{
public:
    using Error::Error;
};

/// A trace or record line could not be read. Carries the 1-based line number.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class VersionError : public Error
{
public:
    using Error::Error;
};

/// Invalid configuration or scenario parameters.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// A content provider failed or produced an unusable response.
class ProviderError : public Error
{
public:
    using Error::Error;
};

} // namespace engage
