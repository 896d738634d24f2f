#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ks {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimMismatch : public Error { public: using Error::Error; };
class NotHermitian : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class NotCommuting : public Error { public: using Error::Error; };
class NotNormalized : public Error { public: using Error::Error; };
class InvalidArgument : public Error { public: using Error::Error; };
class UnknownId : public Error { public: using Error::Error; };
class UndeclaredRelation : public Error { public: using Error::Error; };
class SizeError : public Error { public: using Error::Error; };
class TooManyVariables : public Error { public: using Error::Error; };
class SiteOutOfRange : public Error { public: using Error::Error; };

/// A quantum-mechanical premise could not be verified numerically.
class PremiseFailure : public Error {
public:
    PremiseFailure(std::string premise, const std::string& detail)
        : Error("premise failed: " + premise + " (" + detail + ")"), premise_(std::move(premise)) {}

    const std::string& premise() const noexcept { return premise_; }

private:
    std::string premise_;
};

/// Positioned parse error (1-based line and column).
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace ks
