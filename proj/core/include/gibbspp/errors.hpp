#pragma once

#include <stdexcept>
#include <string>

namespace gibbspp {

struct GeneralPositionViolation : std::runtime_error {
    explicit GeneralPositionViolation(const std::string& what)
        : std::runtime_error("general position violation: " + what) {}
};

struct PointNotInConfiguration : std::runtime_error {
    PointNotInConfiguration() : std::runtime_error("point not in configuration") {}
};

struct TooFewPoints : std::runtime_error {
    explicit TooFewPoints(const std::string& what)
        : std::runtime_error("too few points: " + what) {}
};

struct TemplateDoesNotFitCell : std::runtime_error {
    explicit TemplateDoesNotFitCell(const std::string& what)
        : std::runtime_error("template does not fit cell: " + what) {}
};

struct NotAHyperedge : std::runtime_error {
    NotAHyperedge() : std::runtime_error("not a hyperedge of the configuration") {}
};

struct StructureMismatch : std::runtime_error {
    explicit StructureMismatch(const std::string& what)
        : std::runtime_error("structure mismatch: " + what) {}
};

struct GeometryDegenerate : std::runtime_error {
    explicit GeometryDegenerate(const std::string& what)
        : std::runtime_error("degenerate geometry: " + what) {}
};

struct NotConfined : std::runtime_error {
    NotConfined() : std::runtime_error("no valid range-confinement certificate") {}
};

struct NegativePartDivergent : std::runtime_error {
    NegativePartDivergent() : std::runtime_error("negative part of Hamiltonian exceeds cap") {}
};

struct IllegalMove : std::runtime_error {
    explicit IllegalMove(const std::string& what)
        : std::runtime_error("illegal move: " + what) {}
};

struct TailNotConverged : std::runtime_error {
    explicit TailNotConverged(const std::string& what)
        : std::runtime_error("series tail not converged: " + what) {}
};

struct NoFeasibleStart : std::runtime_error {
    NoFeasibleStart() : std::runtime_error("template fill has infinite energy") {}
};

struct UnsupportedDimension : std::runtime_error {
    explicit UnsupportedDimension(const std::string& what)
        : std::runtime_error("unsupported dimension: " + what) {}
};

struct UnsupportedModel : std::runtime_error {
    explicit UnsupportedModel(const std::string& what)
        : std::runtime_error("unsupported model: " + what) {}
};

struct DivergentSum : std::runtime_error {
    DivergentSum() : std::runtime_error("per-cell potential sum exceeds cap") {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what)
        : std::runtime_error("config error: " + what) {}
};

}  // namespace gibbspp
