#pragma once

#include <stdexcept>
#include <string>

namespace specmt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two vectors (or a vector and a handle) belong to different models.
struct ModelMismatch : Error {
    ModelMismatch() : Error("operands belong to different operator models") {}
    explicit ModelMismatch(const std::string& what) : Error(what) {}
};

// Two type invariants were formed over different parameter sets.
struct ContextMismatch : Error {
    ContextMismatch() : Error("type invariants have different parameter-set contexts") {}
    explicit ContextMismatch(const std::string& what) : Error(what) {}
};

// radon_nikodym precondition failure; carries a witness set with
// nu(S) = 0 < mu(S).
struct NotAbsolutelyContinuous : Error {
    std::string witness;
    explicit NotAbsolutelyContinuous(std::string w)
        : Error("measure is not absolutely continuous; witness set " + w), witness(std::move(w)) {}
};

// realize_type: the residual support would change sigma or sigma_e.
struct ClassViolation : Error {
    std::string witness;
    explicit ClassViolation(std::string w)
        : Error("residual support leaves the model class; witness " + w), witness(std::move(w)) {}
};

// Greedy sequence matching found no unused candidate in the window.
struct MatchingExhausted : Error {
    int index;
    explicit MatchingExhausted(int k)
        : Error("matching exhausted at index " + std::to_string(k) +
                "; the sequences are not mutually dense enough (raise the truncation)"),
          index(k) {}
};

struct CellBudgetTooSmall : Error {
    long long required;
    explicit CellBudgetTooSmall(long long need)
        : Error("cell budget too small; " + std::to_string(need) + " cells required"), required(need) {}
};

struct NotSpectrallyEquivalent : Error {
    std::string report;
    explicit NotSpectrallyEquivalent(std::string rep)
        : Error("models are not spectrally equivalent: " + rep), report(std::move(rep)) {}
};

// Jacobi sweep budget exceeded.
struct NoConvergence : Error {
    NoConvergence() : Error("eigensolver did not converge within the sweep budget") {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

struct ValidationError : Error {
    std::string entity;
    ValidationError(std::string ent, const std::string& what)
        : Error("validation failed for \"" + ent + "\": " + what), entity(std::move(ent)) {}
};

}  // namespace specmt
