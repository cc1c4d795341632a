#pragma once

#include <stdexcept>
#include <string>

namespace hxz {

enum class ErrorKind {
    InvalidInput,
    Precision,
    DegeneratePole,
    InconsistentStructure,
    NotHyperexponential,
    Domain,
    SingularAmplitude,
    SaddleFailure,
    Boundary,
    BranchAmbiguity,
    Quadrature,
    NumericalFailure,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hxz
