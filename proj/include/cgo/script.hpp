#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgo/memory.hpp"
#include "cgo/quality.hpp"
#include "cgo/toolbox.hpp"

namespace cgo::script {

using memory::Diagnostic;

struct FacilitatorSpec {
    quality::FacilitatorConfig config;
    /// Set chunk whose cached qualities drive the adjuster.
    std::string feedback;

    friend bool operator==(const FacilitatorSpec&, const FacilitatorSpec&) = default;
};

struct GenerativeRow {
    std::string id;
    toolbox::RuleInstance rule;
    std::vector<std::string> inputs;
    std::string output;

    friend bool operator==(const GenerativeRow&, const GenerativeRow&) = default;
};

struct ExecutiveRow {
    std::string generator;
    std::vector<std::string> updates;
    double weight = 0.0;

    friend bool operator==(const ExecutiveRow&, const ExecutiveRow&) = default;
};

struct Case {
    std::string id;
    std::vector<ExecutiveRow> rows;

    friend bool operator==(const Case&, const Case&) = default;
};

struct Script {
    std::int64_t agents = 60;
    std::int64_t cycles = 2000;
    std::optional<double> eps_h;
    FacilitatorSpec facilitator;
    memory::Protocol protocol;
    std::vector<GenerativeRow> generators;
    std::vector<Case> cases;

    const GenerativeRow* find_generator(const std::string& id) const;
    const Case* find_case(const std::string& id) const;

    friend bool operator==(const Script&, const Script&) = default;
};

/// Syntax or schema problem while reading script text.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

Script parse(const std::string& text);
Script load(const std::string& path);
std::string serialize(const Script& script);

/// Every violated validity rule; empty when the script is runnable.
std::vector<Diagnostic> validate(const Script& script);

/// Throws std::invalid_argument with all diagnostics when invalid.
void require_valid(const Script& script);

struct ResolvedRow {
    const GenerativeRow* generator = nullptr;
    std::vector<std::string> updates;
    double weight = 0.0;
    double probability = 0.0;
    /// Upper end of this row's slice of [0, 1).
    double cumulative = 0.0;
};

struct RunnableCase {
    std::string id;
    std::vector<ResolvedRow> rows;
};

/// Active rows of a case with normalized selection probabilities. The
/// returned rows point into `script`.
RunnableCase resolve_case(const Script& script, const std::string& case_id);

/// Text of the bundled reference script.
const std::string& reference_text();

}  // namespace cgo::script
