#include "fracstep/io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "fracstep/format.hpp"

namespace fracstep {

namespace {

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

SystemDefinition parse_system_definition(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("system file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("variables") || !doc.contains("equations")) {
    throw Error(ErrorKind::InvalidArgument,
                "system file needs \"variables\" and \"equations\" arrays");
  }
  SystemDefinition def;
  try {
    def.variables = doc.at("variables").get<VariableList>();
    def.equations = doc.at("equations").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed system file: ") + e.what());
  }
  if (def.variables.empty() || def.equations.empty()) {
    throw Error(ErrorKind::InvalidArgument, "system file has no variables or no equations");
  }
  return def;
}

SystemDefinition load_system_definition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open system file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_definition(buf.str());
}

std::string to_json(const SystemDefinition& def) {
  nlohmann::json doc;
  doc["variables"] = def.variables;
  doc["equations"] = def.equations;
  return doc.dump(2);
}

void write_scalar_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "iter,x,f,Z,admissible,discriminant\n";
  for (const auto& r : trace.rows) {
    out << r.iteration << ',' << format_number(r.x) << ',' << format_number(r.fx) << ','
        << optional_number(r.z) << ',' << (r.z ? (r.admissible ? "1" : "0") : "") << ','
        << optional_number(r.discriminant) << '\n';
  }
}

void write_system_trace_csv(std::ostream& out, const VariableList& variables,
                            const SystemTrace& trace) {
  out << "iter";
  for (const auto& v : variables) out << ',' << v;
  out << ",F,Z,delta\n";
  for (const auto& r : trace.rows) {
    out << r.iteration;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) out << ',' << format_number(r.x(i));
    out << ',' << format_number(r.objective) << ',' << optional_number(r.z) << ','
        << optional_number(r.delta) << '\n';
  }
}

void write_gd_trace_csv(std::ostream& out, const VariableList& variables, const GDTrace& trace) {
  out << "iter";
  for (const auto& v : variables) out << ',' << v;
  out << ",F,grad_norm\n";
  for (const auto& r : trace.rows) {
    out << r.iteration;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) out << ',' << format_number(r.x(i));
    out << ',' << format_number(r.objective) << ',' << format_number(r.gradient_norm) << '\n';
  }
}

}  // namespace fracstep
