#pragma once

#include <stdexcept>
#include <string>

namespace vidctx {

// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Precondition violations: bad counts, out-of-range indices, empty inputs.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Transport failure talking to the inference server, after retries.
class TransportError : public Error {
public:
    using Error::Error;
};

// Server replied but the payload is unusable (e.g. no log-probability data).
class ProtocolError : public Error {
public:
    using Error::Error;
};

// Cache storage I/O failure. Distinct from a cache miss, which is not an error.
class StorageError : public Error {
public:
    using Error::Error;
};

// Annotation file problems: unreadable input or malformed rows.
class DatasetError : public Error {
public:
    using Error::Error;
};

// Frame extraction failure: missing frame files, missing decoder, decode errors.
class FrameError : public Error {
public:
    using Error::Error;
};

}  // namespace vidctx
