#pragma once

#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

namespace hessblow {

/// Failure categories shared by every module.
enum class ErrorKind {
    Parameter,        // family parameters violate an admissibility constraint
    Domain,           // evaluation outside the existence interval
    UnresolvedCase,   // the case split leaves this combination open
    UnsupportedCase,  // operation only defined for a sub-family
    Verification,     // an identity does not hold exactly
    NonFinite,        // a stage produced NaN/Inf
    DegenerateField,
    DegenerateInitial,
    InsufficientData,
    NoBlowUpTrend,
    Parse,
    Io,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parameter: return "ParameterError";
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::UnresolvedCase: return "UnresolvedCase";
        case ErrorKind::UnsupportedCase: return "UnsupportedCase";
        case ErrorKind::Verification: return "VerificationFailure";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::DegenerateField: return "DegenerateField";
        case ErrorKind::DegenerateInitial: return "DegenerateInitial";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::NoBlowUpTrend: return "NoBlowUpTrend";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

struct Error {
    ErrorKind kind;
    std::string message;
};

/// Exception wrapper used where an error has to cross a stencil sweep.
class HessblowError : public std::runtime_error {
public:
    explicit HessblowError(Error e)
        : std::runtime_error(std::string(to_string(e.kind)) + ": " + e.message), error_(std::move(e)) {}
    const Error& error() const noexcept { return error_; }

private:
    Error error_;
};

template <typename E>
struct Unexpected {
    E value;
};

template <typename E>
Unexpected<std::decay_t<E>> unexpected(E&& e) {
    return {std::forward<E>(e)};
}

inline Unexpected<Error> fail(ErrorKind kind, std::string message) {
    return {Error{kind, std::move(message)}};
}

/// Minimal stand-in for std::expected (C++23), enough for value-or-error returns.
template <typename T, typename E = Error>
class Expected {
public:
    Expected(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
    Expected(Unexpected<E> err) : storage_(std::in_place_index<1>, std::move(err.value)) {}

    bool has_value() const noexcept { return storage_.index() == 0; }
    explicit operator bool() const noexcept { return has_value(); }

    T& value() & {
        check();
        return std::get<0>(storage_);
    }
    const T& value() const& {
        check();
        return std::get<0>(storage_);
    }
    T&& value() && {
        check();
        return std::get<0>(std::move(storage_));
    }
    T& operator*() & { return value(); }
    const T& operator*() const& { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

    const E& error() const& { return std::get<1>(storage_); }
    E& error() & { return std::get<1>(storage_); }

private:
    void check() const {
        if (!has_value()) {
            if constexpr (std::is_same_v<E, Error>) {
                throw HessblowError(std::get<1>(storage_));
            } else {
                throw std::logic_error("Expected: value() on error");
            }
        }
    }

    std::variant<T, E> storage_;
};

}  // namespace hessblow
