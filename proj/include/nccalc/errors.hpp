#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nccalc {

enum class ErrKind {
    DimensionMismatch,
    ArityMismatch,
    ShapeMismatch,
    NotHermitian,
    NoConvergence,
    NotPSD,
    Singular,
    ZeroMatrix,
    NotContraction,
    GenerationFailure,
    SyntaxError,
    UnknownVariable,
    ArityError,
    KindMismatch,
    DomainViolation,
    BlockStructureViolation,
    InconsistentR,
    MethodRefused,
    DerivativeUnavailable,
    NotIntertwiner,
    NotUnitary,
    CrViolated,
    NotFinite,
    IoError,
};

inline const char* err_kind_name(ErrKind k) {
    switch (k) {
        case ErrKind::DimensionMismatch: return "DimensionMismatch";
        case ErrKind::ArityMismatch: return "ArityMismatch";
        case ErrKind::ShapeMismatch: return "ShapeMismatch";
        case ErrKind::NotHermitian: return "NotHermitian";
        case ErrKind::NoConvergence: return "NoConvergence";
        case ErrKind::NotPSD: return "NotPSD";
        case ErrKind::Singular: return "Singular";
        case ErrKind::ZeroMatrix: return "ZeroMatrix";
        case ErrKind::NotContraction: return "NotContraction";
        case ErrKind::GenerationFailure: return "GenerationFailure";
        case ErrKind::SyntaxError: return "SyntaxError";
        case ErrKind::UnknownVariable: return "UnknownVariable";
        case ErrKind::ArityError: return "ArityError";
        case ErrKind::KindMismatch: return "KindMismatch";
        case ErrKind::DomainViolation: return "DomainViolation";
        case ErrKind::BlockStructureViolation: return "BlockStructureViolation";
        case ErrKind::InconsistentR: return "InconsistentR";
        case ErrKind::MethodRefused: return "MethodRefused";
        case ErrKind::DerivativeUnavailable: return "DerivativeUnavailable";
        case ErrKind::NotIntertwiner: return "NotIntertwiner";
        case ErrKind::NotUnitary: return "NotUnitary";
        case ErrKind::CrViolated: return "CrViolated";
        case ErrKind::NotFinite: return "NotFinite";
        case ErrKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Library-wide exception. `pos` is meaningful for SyntaxError only
/// (byte offset into the source text).
class NcError : public std::runtime_error {
public:
    NcError(ErrKind kind, const std::string& msg, std::size_t pos = npos)
        : std::runtime_error(std::string(err_kind_name(kind)) + ": " + msg),
          kind_(kind),
          pos_(pos) {}

    ErrKind kind() const noexcept { return kind_; }
    std::size_t pos() const noexcept { return pos_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    ErrKind kind_;
    std::size_t pos_;
};

[[noreturn]] inline void raise(ErrKind kind, const std::string& msg, std::size_t pos = NcError::npos) {
    throw NcError(kind, msg, pos);
}

}  // namespace nccalc
