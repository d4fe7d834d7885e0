#pragma once

#include <stdexcept>
#include <string>

namespace lcorr {

enum class ErrorKind {
    domain,
    precision,
    singularity,
    invalid_modulus,
    empty_domain,
    precondition,
    degenerate,
    insufficient_data,
    table,
    parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. The kind lets the CLI map
/// failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

template <ErrorKind K>
class TypedError : public Error {
public:
    explicit TypedError(const std::string& what) : Error(K, what) {}
};

using DomainError = TypedError<ErrorKind::domain>;
using PrecisionError = TypedError<ErrorKind::precision>;
using SingularityError = TypedError<ErrorKind::singularity>;
using InvalidModulusError = TypedError<ErrorKind::invalid_modulus>;
using EmptyDomainError = TypedError<ErrorKind::empty_domain>;
using PreconditionError = TypedError<ErrorKind::precondition>;
using DegenerateError = TypedError<ErrorKind::degenerate>;
using InsufficientDataError = TypedError<ErrorKind::insufficient_data>;
using TableError = TypedError<ErrorKind::table>;
using ParseError = TypedError<ErrorKind::parse>;

}  // namespace lcorr
