#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spi/boundary_matrix.hpp"
#include "spi/interval_union.hpp"
#include "spi/spectrum.hpp"

namespace spi {

using ojson = nlohmann::ordered_json;

struct Tolerances {
  double root = 1e-10;
  double eig = 1e-8;
  double unitary = 1e-10;
  double structure = 1e-8;
};

/// Raw problem description as read from disk. Nothing is validated beyond
/// the JSON shape; see `validate`.
struct ProblemFile {
  std::vector<std::pair<double, double>> intervals;
  std::vector<std::vector<cplx>> matrix;
  std::optional<Window> window;
  std::optional<double> grid_step;
  std::optional<Tolerances> tolerances;
  std::optional<std::vector<double>> candidate_spectrum;
};

/// Throws Parse with a line/column or field-path diagnostic.
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::filesystem::path& path);

/// Canonical form: fixed field order, two-space indentation, trailing newline.
std::string serialize_problem(const ProblemFile& problem);

ojson to_json(cplx z);
ojson to_json(const CVector& v);
ojson to_json(const CMatrix& m);

struct Problem {
  IntervalUnion omega;
  BoundaryMatrix b;
  Window window;
  SpectrumOptions options;
  Tolerances tolerances;
  std::optional<std::vector<double>> candidate_spectrum;
};

/// Builds the interval union and unitary matrix. Throws the validation codes
/// of the underlying constructors (NotUnitary names the offending entry).
Problem validate(const ProblemFile& file);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace spi
