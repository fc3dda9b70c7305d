#pragma once

#include <stdexcept>
#include <string>

namespace pixlock {

/// Base class for all pixlock errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller passed a value outside an operation's documented domain.
struct ValidationError : Error {
    using Error::Error;
};

/// A document or file violates its schema or an invariant; the message
/// names the offending field.
struct ParseError : Error {
    using Error::Error;
};

/// System configuration is internally inconsistent (e.g. a sensitivity
/// group no attribute can ever decrypt).
struct ConfigError : Error {
    using Error::Error;
};

/// A cryptographic primitive failed (randomness, cipher state).
struct CryptoError : Error {
    using Error::Error;
};

/// Authenticated data failed verification: tampered ciphertext, digest
/// mismatch, truncated container. Distinct from an access denial, which
/// is an ordinary (non-exceptional) result.
struct IntegrityError : Error {
    using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable path).
struct IoError : Error {
    using Error::Error;
};

}  // namespace pixlock
