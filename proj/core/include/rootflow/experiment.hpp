#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rootflow/coeffs.hpp"
#include "rootflow/solver.hpp"

namespace rootflow {

enum class EngineChoice { Algebraic, Direct, Both };
enum class OutputFormat { Csv, Json };

/// A fully specified run: problem, engine, tolerances, output.
struct ExperimentConfig {
    IVP ivp;
    EngineChoice engine = EngineChoice::Algebraic;
    OutputFormat format = OutputFormat::Csv;
    SolverOptions options;
    std::string out_path;     // empty: stdout
    std::string example_id;   // set when built from the registry
};

struct ExampleInfo {
    std::string id;
    std::string description;
    int n_roots = 0;
    int m1 = 1;
};

/// Identifiers of the built-in example problems ("3.1.1" .. "3.2.2").
std::vector<ExampleInfo> list_examples();

/// Registry lookup; throws config_error for unknown ids.  t_end defaults
/// to one generating-model period; sample_dt to 1e-3.
ExperimentConfig example_config(const std::string& id);

/// Parses the JSON experiment document.  Complex numbers are [re, im]
/// pairs, frequency ratios are exact "p/q" strings (or integers), omega
/// accepts a number or "q*pi".  Throws config_error.
ExperimentConfig parse_config_json(const std::string& text);

/// CSV with header t,re_x1,im_x1,...,re_xN,im_xN at 17 significant digits
/// (lossless double round trip).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

/// Same fields plus engine metadata and branch events.
std::string trajectory_to_json(const Trajectory& traj);

/// Exact-integer table serialization; entries are decimal strings.
std::string tables_to_json(const CoefficientTables& tables);

}  // namespace rootflow
