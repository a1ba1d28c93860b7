#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fracstep/fracorder.hpp"
#include "fracstep/io.hpp"
#include "fracstep/multivar.hpp"
#include "fracstep/scalar.hpp"

namespace fracstep {

/// x^2 + 3x + 1
ScalarProblem quadratic_example();
/// x^3 + 2x^2 - 4x - 8 = (x - 2)(x + 2)^2
ScalarProblem cubic_example();
/// Three-equation system in x1, x2, x3 used for the multivariate comparison.
SystemDefinition example_system_definition();
SystemProblem example_system();

enum class CheckKind {
  Near,     // |got - expected| <= tolerance
  Below,    // got < expected
  AtLeast,  // got >= expected
  AtMost,   // got <= expected
};

struct ReproRow {
  std::string id;
  std::string description;
  double expected = 0.0;
  double got = 0.0;
  double tolerance = 0.0;
  CheckKind kind = CheckKind::Near;
  bool pass = false;
};

struct ReproOptions {
  /// Multiplies every beta-scan tolerance; 1 is the reference setting.
  double scan_tolerance_scale = 1.0;
};

std::vector<ReproRow> repro_suite(const ReproOptions& options = {});

/// Table with expected/got/tolerance columns; returns true iff all rows pass.
bool print_repro_table(std::ostream& out, const std::vector<ReproRow>& rows);

}  // namespace fracstep
