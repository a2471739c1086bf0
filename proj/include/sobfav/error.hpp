#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sobfav {

enum class ErrorKind {
    WindowExhausted,
    InsufficientMoments,
    SingularDiagonal,
    NotSymmetric,
    IndexMismatch,
    DegenerateSuperdiagonal,
    DegreeTooLarge,
    NotPositiveDefinite,
    OrderMismatch,
    NotMomentMatrix,
    InvalidInput,
};

constexpr std::string_view error_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::WindowExhausted: return "WindowExhausted";
        case ErrorKind::InsufficientMoments: return "InsufficientMoments";
        case ErrorKind::SingularDiagonal: return "SingularDiagonal";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::IndexMismatch: return "IndexMismatch";
        case ErrorKind::DegenerateSuperdiagonal: return "DegenerateSuperdiagonal";
        case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::OrderMismatch: return "OrderMismatch";
        case ErrorKind::NotMomentMatrix: return "NotMomentMatrix";
        case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/// Every failure raised by the library. `kind()` names the module-level error;
/// `index()` carries the offending minor/row where one exists (1-based for minors).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::size_t index = 0)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind), index_(index) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }
    std::size_t index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::size_t index_;
};

}  // namespace sobfav
