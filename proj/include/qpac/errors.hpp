#pragma once

#include <stdexcept>
#include <string>

namespace qpac {

// Base class for everything this library throws on contract violations.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& msg = "matrix is not Hermitian within tolerance")
        : Error(msg) {}
};

struct NotPsd : Error {
    explicit NotPsd(const std::string& msg = "matrix is not positive semidefinite within tolerance")
        : Error(msg) {}
};

struct DimMismatch : Error {
    explicit DimMismatch(const std::string& msg = "dimension mismatch") : Error(msg) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg = "length mismatch") : Error(msg) {}
};

struct DimCapExceeded : Error {
    long long required;
    long long cap;
    DimCapExceeded(long long required_, long long cap_)
        : Error("joint dimension " + std::to_string(required_) + " exceeds cap " +
                std::to_string(cap_)),
          required(required_), cap(cap_) {}
};

struct HandleConsumed : Error {
    explicit HandleConsumed(const std::string& msg = "hidden state handle already consumed")
        : Error(msg) {}
};

struct EmptySet : Error {
    explicit EmptySet(const std::string& msg = "set must be non-empty") : Error(msg) {}
};

struct NotPureClass : Error {
    explicit NotPureClass(const std::string& msg = "concept class has non-pure outputs")
        : Error(msg) {}
};

struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& msg = "invalid configuration") : Error(msg) {}
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& msg = "invalid parameters") : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg = "parse error") : Error(msg) {}
};

struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& msg = "invariant violation") : Error(msg) {}
};

// Raised when a guarantee the algorithms rely on fails to hold at runtime.
struct InternalInvariantViolation : Error {
    explicit InternalInvariantViolation(const std::string& msg) : Error(msg) {}
};

struct CalibrationFailed : Error {
    explicit CalibrationFailed(const std::string& msg = "no grid value met the target success rate")
        : Error(msg) {}
};

}  // namespace qpac
