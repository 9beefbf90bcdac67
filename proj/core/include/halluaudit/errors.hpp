#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace halluaudit {

// Structural defects in the input file. Fatal: the audit cannot start.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

class EmptyTrajectoryError : public SchemaError {
public:
    EmptyTrajectoryError() : SchemaError("trajectory has zero research loops") {}
};

// Backend unreachable after the configured retries.
class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

// A prompt template was rendered with a placeholder left unbound.
class TemplateError : public std::runtime_error {
public:
    explicit TemplateError(const std::string& what) : std::runtime_error(what) {}
};

// Model reply could not be parsed even after the repair retry.
class ModelFormatError : public std::runtime_error {
public:
    explicit ModelFormatError(const std::string& what) : std::runtime_error(what) {}
};

class DuplicateClaimIdError : public std::runtime_error {
public:
    explicit DuplicateClaimIdError(const std::string& id)
        : std::runtime_error("claim id already recorded: " + id) {}
};

// Exact worst-case enumeration is guarded; beyond the guard it is infeasible.
class TooManyClustersError : public std::runtime_error {
public:
    explicit TooManyClustersError(std::size_t n, std::size_t guard)
        : std::runtime_error("exact enumeration guard exceeded: " + std::to_string(n) +
                             " clusters > " + std::to_string(guard)) {}
};

// Malformed benchmark fixture lines or corpus files.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class InternalInvariantError : public std::logic_error {
public:
    explicit InternalInvariantError(const std::string& what) : std::logic_error(what) {}
};

// Non-fatal caveats accumulated during an audit. "degenerate" marks scores
// whose denominator was empty; "tooling" marks model/transport fallbacks.
struct Flag {
    enum class Kind { degenerate, tooling };
    Kind kind = Kind::tooling;
    std::string code;     // stable machine identifier, e.g. "h_es.no_claims"
    std::string context;  // free-form detail (unit id, loop, ...)

    bool operator==(const Flag&) const = default;
};

using FlagList = std::vector<Flag>;

std::string to_string(Flag::Kind kind);

}  // namespace halluaudit
