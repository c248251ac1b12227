#pragma once

/**
 * @file error.hpp
 * @brief Error kinds shared by every linq module.
 *
 * Domain failures (a matrix that is not unimodular, a map that is not
 * linearized, ...) are reported as linq::Error carrying an ErrorKind.
 * Malformed text is reported as linq::ParseError. The CLI maps the first
 * to exit code 1 and the second to exit code 2.
 */

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace linq {

enum class ErrorKind {
    NotPrime,
    InvalidModulus,
    FieldMismatch,
    DivisionByZero,
    Undefined,
    NotSquarefree,
    MixedOrNonQPowerTerm,
    DimensionMismatch,
    NotUnimodular,
    NotUnimodularRow,
    ZeroInput,
    OrderViolated,
    CharDividesOrder,
    NotIrreducible,
    ConsistencyFailure,
    MixedTerm,
    PrincipalMinorNotOne,
    JacobianNotConstant,
    LinearPartNotIdentity,
    NotTriangular,
    Overflow,
};

inline std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::InvalidModulus: return "InvalidModulus";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::Undefined: return "Undefined";
        case ErrorKind::NotSquarefree: return "NotSquarefree";
        case ErrorKind::MixedOrNonQPowerTerm: return "MixedOrNonQPowerTerm";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotUnimodular: return "NotUnimodular";
        case ErrorKind::NotUnimodularRow: return "NotUnimodularRow";
        case ErrorKind::ZeroInput: return "ZeroInput";
        case ErrorKind::OrderViolated: return "OrderViolated";
        case ErrorKind::CharDividesOrder: return "CharDividesOrder";
        case ErrorKind::NotIrreducible: return "NotIrreducible";
        case ErrorKind::ConsistencyFailure: return "ConsistencyFailure";
        case ErrorKind::MixedTerm: return "MixedTerm";
        case ErrorKind::PrincipalMinorNotOne: return "PrincipalMinorNotOne";
        case ErrorKind::JacobianNotConstant: return "JacobianNotConstant";
        case ErrorKind::LinearPartNotIdentity: return "LinearPartNotIdentity";
        case ErrorKind::NotTriangular: return "NotTriangular";
        case ErrorKind::Overflow: return "Overflow";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Index witness attached by some errors (e.g. the principal-minor subset).
    const std::vector<std::size_t>& witness() const noexcept { return witness_; }
    Error& with_witness(std::vector<std::size_t> w) {
        witness_ = std::move(w);
        return *this;
    }

private:
    ErrorKind kind_;
    std::vector<std::size_t> witness_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), pos_(pos) {}

    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace linq
