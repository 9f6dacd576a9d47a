#include "spi/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Parse, path + ": " + what);
}

double number(const ojson& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number, found " + std::string(j.type_name()));
  return j.get<double>();
}

cplx complex_entry(const ojson& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected an [re, im] pair");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

const ojson& array_field(const ojson& root, const char* key) {
  const auto& j = root.at(key);
  if (!j.is_array()) fail(key, "expected an array");
  return j;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  ojson root;
  try {
    root = ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  if (!root.is_object()) fail("$", "expected an object");
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (key != "intervals" && key != "matrix" && key != "window" && key != "grid_step" && key != "tolerances" &&
        key != "candidate_spectrum")
      fail(key, "unknown field");
  }
  if (!root.contains("intervals")) fail("intervals", "missing");
  if (!root.contains("matrix")) fail("matrix", "missing");

  ProblemFile out;
  const auto& iv = array_field(root, "intervals");
  for (std::size_t i = 0; i < iv.size(); ++i) {
    const std::string path = "intervals[" + std::to_string(i) + "]";
    if (!iv[i].is_array() || iv[i].size() != 2) fail(path, "expected an [alpha, beta] pair");
    out.intervals.emplace_back(number(iv[i][0], path + "[0]"), number(iv[i][1], path + "[1]"));
  }

  const auto& mat = array_field(root, "matrix");
  for (std::size_t i = 0; i < mat.size(); ++i) {
    const std::string path = "matrix[" + std::to_string(i) + "]";
    if (!mat[i].is_array()) fail(path, "expected a row");
    if (mat[i].size() != mat.size()) fail(path, "row length differs from the row count");
    std::vector<cplx> row;
    for (std::size_t k = 0; k < mat[i].size(); ++k)
      row.push_back(complex_entry(mat[i][k], path + "[" + std::to_string(k) + "]"));
    out.matrix.push_back(std::move(row));
  }

  if (root.contains("window")) {
    const auto& w = root["window"];
    if (!w.is_array() || w.size() != 2) fail("window", "expected [lo, hi]");
    out.window = Window{number(w[0], "window[0]"), number(w[1], "window[1]")};
  }
  if (root.contains("grid_step")) out.grid_step = number(root["grid_step"], "grid_step");
  if (root.contains("tolerances")) {
    const auto& t = root["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    Tolerances tol;
    for (const auto& [key, value] : t.items()) {
      const std::string path = "tolerances." + key;
      if (key == "root") tol.root = number(value, path);
      else if (key == "eig") tol.eig = number(value, path);
      else if (key == "unitary") tol.unitary = number(value, path);
      else if (key == "structure") tol.structure = number(value, path);
      else fail(path, "unknown tolerance");
    }
    out.tolerances = tol;
  }
  if (root.contains("candidate_spectrum")) {
    const auto& c = array_field(root, "candidate_spectrum");
    std::vector<double> values;
    for (std::size_t k = 0; k < c.size(); ++k) values.push_back(number(c[k], "candidate_spectrum[" + std::to_string(k) + "]"));
    out.candidate_spectrum = std::move(values);
  }
  return out;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

ojson to_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson to_json(const CVector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

ojson to_json(const CMatrix& m) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

std::string serialize_problem(const ProblemFile& p) {
  ojson root;
  root["intervals"] = ojson::array();
  for (const auto& [a, b] : p.intervals) root["intervals"].push_back({a, b});
  root["matrix"] = ojson::array();
  for (const auto& row : p.matrix) {
    ojson r = ojson::array();
    for (cplx z : row) r.push_back(to_json(z));
    root["matrix"].push_back(std::move(r));
  }
  if (p.window) root["window"] = {p.window->lo, p.window->hi};
  if (p.grid_step) root["grid_step"] = *p.grid_step;
  if (p.tolerances) {
    root["tolerances"] = {{"root", p.tolerances->root},
                          {"eig", p.tolerances->eig},
                          {"unitary", p.tolerances->unitary},
                          {"structure", p.tolerances->structure}};
  }
  if (p.candidate_spectrum) root["candidate_spectrum"] = *p.candidate_spectrum;
  return root.dump(2) + "\n";
}

Problem validate(const ProblemFile& file) {
  auto omega = IntervalUnion::create(file.intervals);
  const auto n = file.matrix.size();
  if (n != omega.size()) {
    std::ostringstream os;
    os << "matrix is " << n << "x" << n << " but there are " << omega.size() << " intervals";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx z = file.matrix[i][k];
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorCode::NonFinite, "matrix[" + std::to_string(i) + "][" + std::to_string(k) + "] is not finite");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = z;
    }
  const Tolerances tol = file.tolerances.value_or(Tolerances{});
  auto b = BoundaryMatrix::create(std::move(m), tol.unitary);

  Window window = file.window.value_or(default_window(omega));
  if (!(window.hi > window.lo)) throw Error(ErrorCode::InvalidArgument, "window must satisfy lo < hi");
  SpectrumOptions options;
  options.tol_root = tol.root;
  options.tol_eig = tol.eig;
  if (file.grid_step) {
    if (!(*file.grid_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid_step must be positive");
    options.grid_step = *file.grid_step;
  }
  return Problem{std::move(omega), std::move(b), window, options, tol, file.candidate_spectrum};
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spi
