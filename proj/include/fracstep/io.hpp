#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/multivar.hpp"
#include "fracstep/scalar.hpp"

namespace fracstep {

/// Text form of a system definition file:
///   {"variables": ["x1", "x2"], "equations": ["<expr>", ...]}
struct SystemDefinition {
  VariableList variables;
  std::vector<std::string> equations;
};

SystemDefinition parse_system_definition(std::string_view json_text);
SystemDefinition load_system_definition(const std::filesystem::path& path);
std::string to_json(const SystemDefinition& def);

/// iter,x,f,Z,admissible,discriminant
void write_scalar_trace_csv(std::ostream& out, const SolveTrace& trace);

/// iter,<variables...>,F,Z,delta
void write_system_trace_csv(std::ostream& out, const VariableList& variables,
                            const SystemTrace& trace);

/// iter,<variables...>,F,grad_norm
void write_gd_trace_csv(std::ostream& out, const VariableList& variables, const GDTrace& trace);

}  // namespace fracstep
