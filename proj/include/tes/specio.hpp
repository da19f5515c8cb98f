#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tes/decomposition.hpp"
#include "tes/scenario.hpp"
#include "tes/stream.hpp"

namespace tes::specio {

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::size_t line = 1;  // 1-based
    std::size_t col = 1;   // 1-based
    std::string message;
    std::optional<std::string> hint;
};

std::string diagnostic_str(const Diagnostic& d);

struct ComponentDecl {
    std::string name;
    Component component;

    friend bool operator==(const ComponentDecl&, const ComponentDecl&) = default;
};

// Declared candidate universe: an interface plus an arithmetic stamp grid.
// The horizon is taken from the query operands at execution time.
struct UniverseDecl {
    std::string name;
    EventSet interface;
    Rational grid_lo;
    Rational grid_hi;
    Rational grid_step;
    std::size_t max_obs = 1;

    friend bool operator==(const UniverseDecl&, const UniverseDecl&) = default;
};

// Signature reference: "sync" or "rf" with an optional period (default 1).
struct SigRef {
    std::string name;
    Rational period{1};

    friend bool operator==(const SigRef&, const SigRef&) = default;
};

struct QueryProduct {
    std::string left, right;
    SigRef sig;
    std::optional<std::string> as_name;

    friend bool operator==(const QueryProduct&, const QueryProduct&) = default;
};

struct QueryDivide {
    std::string dividend, divisor;
    SigRef sig;
    std::string universe;
    Choice choice = Choice::theorem1_lower_bound;

    friend bool operator==(const QueryDivide&, const QueryDivide&) = default;
};

struct QueryConform {
    std::string spec, plant;
    SigRef sig;
    std::string universe;
    Choice choice = Choice::greatest;

    friend bool operator==(const QueryConform&, const QueryConform&) = default;
};

struct QueryLaws {
    SigRef sig;
    std::vector<std::string> witnesses;

    friend bool operator==(const QueryLaws&, const QueryLaws&) = default;
};

struct QueryScenario {
    std::string which;  // grid-division | update | sort
    std::vector<std::pair<std::string, Rational>> params;

    friend bool operator==(const QueryScenario&, const QueryScenario&) = default;
};

using Query = std::variant<QueryProduct, QueryDivide, QueryConform, QueryLaws, QueryScenario>;

struct SpecDocument {
    std::vector<ComponentDecl> components;
    std::vector<UniverseDecl> universes;
    std::vector<Query> queries;

    friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

struct ParseResult {
    std::optional<SpecDocument> document;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return document.has_value(); }
};

ParseResult parse(const std::string& source);

// Canonical DSL rendering of a document; parse(serialize_document(d)) == d.
std::string serialize_document(const SpecDocument& doc);

// Canonical result renderings: sorted interfaces and behaviors, one
// observation per line as `t: {e1, e2}`.
std::string render_tes(const Tes& sigma, const std::string& indent = "");
std::string render_component(const Component& c, const std::string& indent = "");

struct ExecOptions {
    bool json = false;
    unsigned long long max_universe = 1000000;
    std::size_t max_subset_base = 20;
};

struct ExecOutcome {
    int exit_code = 0;  // 0 ok, 1 diagnostics/failed checks, 2 resource refusal
    std::string output;
    std::vector<Diagnostic> diagnostics;
};

ExecOutcome run_document(const SpecDocument& doc, const ExecOptions& opt);

}  // namespace tes::specio
