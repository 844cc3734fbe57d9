#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathid/optimize.hpp"

namespace pathid {

inline constexpr const char* kSpecSchema = "pathid-spec/1";
inline constexpr const char* kSolutionSchema = "pathid-solution/1";
inline constexpr const char* kStateSchema = "pathid-state/1";
inline constexpr const char* kToolVersion = "pathid 0.1.0";

/// Schema/validation failure; message carries field context, one line per
/// violation.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// How the target was named in the document, so serialization round-trips
/// without expanding builders.
struct TargetDescriptor {
    std::string name;  // ghz | w | srv422 | logical-bell | custom
    int n = 0;
    int d = 2;
    std::string code;         // logical-bell only
    TargetState custom;       // custom only

    TargetState resolve() const;
};

struct SpecDocument {
    ExperimentSpec spec;
    TargetDescriptor target;
    bool ancillas_specified = true;  // absent "ancillas" key requests the CLI sweep
};

SpecDocument parse_spec(const std::string& text);
std::string serialize_spec(const SpecDocument& doc);

struct SolutionDocument {
    Graph graph;
    double loss = 1.0;
    double fidelity = 0.0;
    StateVector state;  // as recorded at discovery time
    std::uint64_t seed = 0;
    int restarts_used = 0;
    std::string tool_version = kToolVersion;
};

SolutionDocument parse_solution(const std::string& text);
std::string serialize_solution(const SolutionDocument& doc);

/// Recompute the state from the embedded graph and compare with the recorded
/// table; returns mismatch descriptions (empty = consistent).
std::vector<std::string> reverify_solution(const SolutionDocument& doc, double tol = 1e-9);

struct StateDocument {
    std::vector<int> dims;
    TargetState state;
};

StateDocument parse_state(const std::string& text);
std::string serialize_state(const StateDocument& doc);

enum class ExportFormat { dot, graphml };
ExportFormat export_format_from_name(const std::string& name);

/// Deterministic figure-grade export. Vertices are labeled with index and
/// role when a layout is given; edge styling encodes the color pair and
/// negative-real-weight edges carry a square marker attribute.
std::string export_graph(const Graph& g, ExportFormat format,
                         const std::optional<LocationLayout>& layout = {});

/// Doubles printed with up to 17 significant digits (round-trip exact).
std::string format_double(double x);

}  // namespace pathid
