#include "spi/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "spi/analysis.hpp"
#include "spi/evolution.hpp"
#include "spi/paths.hpp"

namespace spi {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::SuspectedMissedRoot:
      return 2;
    case ErrorCode::GuardExceeded:
      return 3;
    default:
      return 1;
  }
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

ojson window_json(Window w) { return ojson::array({w.lo, w.hi}); }

ojson interval_json(const Interval& i) { return ojson::array({i.lo, i.hi}); }

ojson point_json(const SpectralPoint& p) {
  ojson basis = ojson::array();
  for (const auto& v : p.basis) basis.push_back(to_json(v));
  return {{"lambda", p.lambda},
          {"dimension", p.dimension()},
          {"constant", p.constant},
          {"root_residual", p.root_residual},
          {"eig_residual", p.eig_residual},
          {"basis", std::move(basis)}};
}

ojson spectral_check_json(const SpectralCheck& c) {
  ojson out{{"verdict", to_string(c.verdict)}};
  out["witness_lambda"] = c.witness_lambda ? ojson(*c.witness_lambda) : ojson(nullptr);
  ojson basis = ojson::array();
  for (const auto& v : c.witness_basis) basis.push_back(to_json(v));
  out["witness_basis"] = std::move(basis);
  out["reason"] = c.reason;
  return out;
}

ojson check_json(const NamedCheck& c) {
  return {{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}};
}

ojson tiling_json(const TilingCertificate& t) {
  ojson pieces = ojson::array(), holes = ojson::array(), overlaps = ojson::array();
  for (const auto& p : t.pieces) pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"source", p.source}});
  for (const auto& h : t.holes) holes.push_back(interval_json(h));
  for (const auto& o : t.overlaps) overlaps.push_back(interval_json(o));
  return {{"tiles", t.tiles}, {"modulus", t.modulus}, {"pieces", pieces}, {"holes", holes}, {"overlaps", overlaps}};
}

ojson lattice_json(const LatticeSuiteReport& r) {
  ojson chain = ojson::array();
  for (const auto& s : r.chain)
    chain.push_back({{"source", s.source}, {"shift", s.shift}, {"shift_in_lattice", s.shift_in_lattice},
                     {"image", interval_json(s.image)}});
  return {{"kind", to_string(r.kind)},
          {"sigma", r.sigma},
          {"full_cycle", r.full_cycle},
          {"measure", r.measure},
          {"theta0", r.theta0},
          {"weights_ok", r.weights_ok},
          {"differences_in_lattice", r.differences_in_lattice},
          {"spectrum_ok", r.spectrum_ok},
          {"spectrum_error", r.spectrum_error},
          {"spectrum_count", r.spectrum_count},
          {"tiling", tiling_json(r.tiling)},
          {"chain", std::move(chain)},
          {"chain_ok", r.chain_ok},
          {"chain_union", interval_json(r.chain_union)},
          {"pass", r.pass},
          {"failures", r.failures}};
}

ojson evidence_json(const SpectralEvidence& e) {
  return {{"window", window_json(e.window)},
          {"count", e.count},
          {"orthogonal", e.orthogonal},
          {"max_off_diagonal", e.max_off_diagonal},
          {"density_ratio", e.density_ratio},
          {"density_consistent", e.density_consistent},
          {"parseval_residuals", e.parseval_residuals},
          {"parseval_residual", e.parseval_residual}};
}

std::string word_string(const std::vector<std::size_t>& word) {
  std::string out;
  for (std::size_t k = 0; k < word.size(); ++k) out += (k ? "-" : "") + std::to_string(word[k]);
  return out;
}

Problem prepare(const ProblemFile& file, const CommandOptions& opt) {
  Problem p = validate(file);
  if (opt.window) {
    if (!(opt.window->hi > opt.window->lo)) throw Error(ErrorCode::InvalidArgument, "window must satisfy lo < hi");
    p.window = *opt.window;
  }
  if (opt.grid_step) {
    if (!(*opt.grid_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
    p.options.grid_step = *opt.grid_step;
  }
  p.options.jobs = std::max(1u, opt.jobs);
  if (opt.tol) {
    if (!(*opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    p.tolerances.structure = *opt.tol;
  }
  return p;
}

template <class Body>
CommandResult run(const char* name, const ProblemFile& file, const CommandOptions& opt, ojson inputs, Body body) {
  const auto start = std::chrono::steady_clock::now();
  CommandResult r;
  r.report["command"] = name;
  r.report["inputs_digest"] = fnv1a_hex(serialize_problem(file) + inputs.dump());
  r.report["inputs"] = std::move(inputs);
  r.report["status"] = "ok";
  try {
    const Problem p = prepare(file, opt);
    body(p, r);
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e.code());
    r.report["status"] = "error";
    r.report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    r.exit_code = 2;
    r.report["status"] = "error";
    r.report["error"] = {{"code", "Internal"}, {"message", e.what()}};
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  r.report["timing"] = {{"elapsed_ms", elapsed.count()}};
  return r;
}

ojson common_inputs(const ProblemFile& file, const CommandOptions& opt) {
  ojson in;
  in["window"] = opt.window ? window_json(*opt.window) : (file.window ? window_json(*file.window) : ojson(nullptr));
  in["grid_step"] = opt.grid_step ? ojson(*opt.grid_step) : (file.grid_step ? ojson(*file.grid_step) : ojson(nullptr));
  in["tol"] = opt.tol ? ojson(*opt.tol) : ojson(nullptr);
  return in;
}

double sample_in(const IntervalUnion& omega, std::mt19937_64& rng) {
  const auto lengths = omega.lengths();
  std::discrete_distribution<std::size_t> pick(lengths.begin(), lengths.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const std::size_t i = pick(rng);
    const double x = omega.alpha(i) + unit(rng) * omega.length(i);
    if (omega.locate(x)) return x;
  }
}

PiecewiseExpPoly bump(const IntervalUnion& omega) {
  std::vector<std::vector<ExpAtom>> atoms(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double l = omega.length(i);
    // u^2 (l - u)^2 / (l / 2)^4 in u = x - alpha_i
    const double s = std::pow(0.5 * l, 4);
    const std::vector<cplx> local{0.0, 0.0, l * l / s, -2.0 * l / s, 1.0 / s};
    atoms[i].push_back({0.0, shift_polynomial(local, -omega.alpha(i))});
  }
  return PiecewiseExpPoly::from_atoms(omega, std::move(atoms));
}

PiecewiseExpPoly atoms_function(const IntervalUnion& omega, const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("function atoms: ") + e.what());
  }
  if (!j.is_array() || j.size() != omega.size())
    throw Error(ErrorCode::Parse, "function atoms: expected one atom list per interval");
  std::vector<std::vector<ExpAtom>> atoms(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const std::string path = "atoms[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw Error(ErrorCode::Parse, path + ": expected a list");
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      const auto& a = j[i][k];
      const std::string apath = path + "[" + std::to_string(k) + "]";
      if (!a.is_object() || !a.contains("frequency") || !a.contains("poly") || !a["frequency"].is_number() ||
          !a["poly"].is_array())
        throw Error(ErrorCode::Parse, apath + ": expected {\"frequency\": number, \"poly\": [[re, im], ...]}");
      ExpAtom atom;
      atom.frequency = a["frequency"].get<double>();
      for (const auto& c : a["poly"]) {
        if (c.is_number()) {
          atom.poly.emplace_back(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
          atom.poly.emplace_back(c[0].get<double>(), c[1].get<double>());
        } else {
          throw Error(ErrorCode::Parse, apath + ".poly: expected [re, im] pairs");
        }
      }
      atoms[i].push_back(std::move(atom));
    }
  }
  return PiecewiseExpPoly::from_atoms(omega, std::move(atoms));
}

// spectrum points ordered by |lambda|, then lambda
std::vector<SpectralPoint> by_magnitude(const SpectrumReport& report) {
  auto points = report.points;
  std::stable_sort(points.begin(), points.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    if (std::abs(a.lambda) != std::abs(b.lambda)) return std::abs(a.lambda) < std::abs(b.lambda);
    return a.lambda < b.lambda;
  });
  return points;
}

}  // namespace

CommandResult cmd_spectrum(const ProblemFile& file, const CommandOptions& opt) {
  ojson inputs = common_inputs(file, opt);
  return run("spectrum", file, opt, std::move(inputs), [&](const Problem& p, CommandResult& r) {
    const auto spectrum = best_spectrum(p.omega, p.b, p.window, p.options);
    r.report["window"] = window_json(spectrum.window);
    r.report["method"] = spectrum.method == SpectrumMethod::EqualLength ? "equal_length" : "scan";
    r.report["grid_step"] = spectrum.grid_step;
    r.report["phase_speed_bound"] = spectrum.phase_speed_bound;
    r.report["count"] = spectrum.points.size();
    r.report["count_with_multiplicity"] = spectrum.count_with_multiplicity();
    ojson points = ojson::array();
    std::ostringstream csv;
    csv << "lambda,dimension,constant,root_residual,eig_residual\n";
    for (const auto& pt : spectrum.points) {
      points.push_back(point_json(pt));
      csv << fmt(pt.lambda) << ',' << pt.dimension() << ',' << (pt.constant ? "true" : "false") << ','
          << fmt(pt.root_residual) << ',' << fmt(pt.eig_residual) << '\n';
    }
    r.report["spectrum"] = std::move(points);
    r.csv = csv.str();
    const auto probes = default_probes(p.omega);
    r.report["evidence"] =
        evidence_json(spectral_pair_evidence(p.omega, spectrum.lambdas(), p.window, probes, p.tolerances.structure));
    if (p.candidate_spectrum)
      r.report["candidate_evidence"] = evidence_json(
          spectral_pair_evidence(p.omega, *p.candidate_spectrum, p.window, probes, p.tolerances.structure));
  });
}

CommandResult cmd_evolve(const ProblemFile& file, const CommandOptions& opt) {
  ojson inputs = common_inputs(file, opt);
  inputs["t"] = opt.t;
  inputs["function"] = opt.function;
  return run("evolve", file, opt, std::move(inputs), [&](const Problem& p, CommandResult& r) {
    std::optional<PiecewiseExpPoly> oracle;
    PiecewiseExpPoly f = PiecewiseExpPoly::zero(p.omega);
    if (opt.function == "bump") {
      f = bump(p.omega);
    } else if (opt.function.rfind("eigen:", 0) == 0) {
      std::size_t k = 0;
      try {
        k = std::stoul(opt.function.substr(6));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "eigen:K needs a non-negative integer K");
      }
      const auto spectrum = best_spectrum(p.omega, p.b, p.window, p.options);
      const auto points = by_magnitude(spectrum);
      if (k >= points.size()) throw Error(ErrorCode::InvalidArgument, "eigen:K is beyond the spectrum in the window");
      const EigenTerm term{points[k].lambda, points[k].basis.front(), {1.0, 0.0}};
      r.report["eigenvalue"] = term.lambda;
      f = eigen_combination(p.omega, {term});
      oracle = apply_U_spectral(p.omega, spectrum, opt.t, {term});
    } else if (opt.function.rfind("atoms:", 0) == 0) {
      f = atoms_function(p.omega, opt.function.substr(6));
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown function '" + opt.function + "'");
    }
    r.report["predicted_paths"] = predicted_path_bound(p.omega, opt.t);
    const auto result = apply_U_paths(p.omega, p.b, opt.t, f);
    r.report["event_count"] = result.event_count;
    r.report["pieces"] = result.function.piece_count();
    r.report["norm_before"] = norm(f);
    r.report["norm_after"] = norm(result.function);
    r.report["boundary_defect_before"] = boundary_defect(p.b, f);
    r.report["boundary_defect_after"] = boundary_defect(p.b, result.function);
    if (oracle) r.report["oracle_max_difference"] = max_abs_difference(result.function, *oracle);
    std::ostringstream csv;
    csv << "x,re,im\n";
    const auto xs = probe_points(result.function);
    for (double x : xs) {
      const cplx v = result.function(x);
      csv << fmt(x) << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
    }
    r.report["samples"] = xs.size();
    r.csv = csv.str();
  });
}

CommandResult cmd_verify(const ProblemFile& file, const CommandOptions& opt) {
  ojson inputs = common_inputs(file, opt);
  inputs["seed"] = opt.seed;
  inputs["trials"] = opt.trials;
  inputs["probes"] = opt.probes;
  return run("verify", file, opt, std::move(inputs), [&](const Problem& p, CommandResult& r) {
    const double tol = opt.tol.value_or(1e-9);
    std::vector<NamedCheck> checks;
    auto emit = [&] {
      ojson list = ojson::array();
      std::ostringstream csv;
      csv << "check,status,detail\n";
      for (const auto& c : checks) {
        list.push_back(check_json(c));
        std::string detail = c.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        csv << c.name << ',' << to_string(c.status) << ',' << detail << '\n';
      }
      r.report["checks"] = std::move(list);
      r.csv = csv.str();
    };

    const auto gap = gap_criterion(p.omega, p.omega.tolerance());
    checks.push_back(gap);
    if (gap.status == CheckStatus::Fail) {
      const std::string why = "gap criterion fails, so omega is not spectral for any boundary matrix";
      for (const char* name : {"spectral_matrix", "path_sum_identities", "local_translation", "unitarity", "group_law",
                               "domain_invariance"})
        checks.push_back({name, CheckStatus::Skipped, why});
      r.report["verdict"] = "not_spectral";
      r.report["explanation"] = why;
      emit();
      return;
    }

    const auto spectral = spectral_matrix_check(p.omega, p.b, p.window, p.options);
    r.report["spectral_check"] = spectral_check_json(spectral);
    checks.push_back({"spectral_matrix", spectral.spectral() ? CheckStatus::Pass : CheckStatus::Fail,
                      std::string(to_string(spectral.verdict)) + (spectral.reason.empty() ? "" : ": " + spectral.reason)});
    r.report["verdict"] = to_string(spectral.verdict);

    std::mt19937_64 rng(opt.seed);
    {
      NamedCheck c{"path_sum_identities", CheckStatus::Pass, {}};
      double worst = 0.0;
      for (std::size_t k = 0; k < opt.probes; ++k) {
        const double x = sample_in(p.omega, rng);
        const double y = sample_in(p.omega, rng);
        const auto id = local_translation_identities(p.omega, p.b, x, y - x, tol);
        for (const auto& e : id.offending)
          worst = std::max(worst, std::abs(e.sum - (std::abs(e.end - y) <= p.omega.tolerance() ? 1.0 : 0.0)));
        if (!id.pass && c.status == CheckStatus::Pass) {
          c.status = CheckStatus::Fail;
          std::ostringstream os;
          os << "x = " << x << ", t = " << y - x;
          if (!id.target_reached) os << ": x + t is not an end";
          for (const auto& e : id.offending) os << "; end " << e.end << " sums to (" << e.sum.real() << ", " << e.sum.imag() << ")";
          c.detail = os.str();
        }
      }
      if (c.status == CheckStatus::Pass) {
        std::ostringstream os;
        os << opt.probes << " probes";
        c.detail = os.str();
      }
      checks.push_back(std::move(c));
    }
    {
      const auto lt = local_translation_test(p.omega, p.b, opt.trials, tol, opt.seed);
      std::ostringstream os;
      os << lt.trials << " trials, max error " << lt.max_error;
      if (lt.witness) os << "; witness x = " << lt.witness->x << ", t = " << lt.witness->t;
      checks.push_back({"local_translation", lt.pass ? CheckStatus::Pass : CheckStatus::Fail, os.str()});
      r.report["local_translation"] = {{"pass", lt.pass}, {"trials", lt.trials}, {"max_error", lt.max_error}};
      if (lt.witness)
        r.report["local_translation"]["witness"] = {{"x", lt.witness->x},
                                                    {"t", lt.witness->t},
                                                    {"evolved", to_json(lt.witness->evolved)},
                                                    {"translated", to_json(lt.witness->translated)}};
    }
    {
      std::uniform_real_distribution<double> time(-2.0 * p.omega.measure(), 2.0 * p.omega.measure());
      double unitarity = 0.0, group = 0.0, domain = 0.0;
      for (std::size_t k = 0; k < opt.probes; ++k) {
        const auto f = random_domain_function(p.omega, p.b, rng);
        const double s = time(rng), t = time(rng);
        const auto ut = apply_U_paths(p.omega, p.b, t, f).function;
        unitarity = std::max(unitarity, std::abs(norm(ut) - norm(f)) / std::max(1.0, norm(f)));
        const auto us_ut = apply_U_paths(p.omega, p.b, s, ut).function;
        const auto ust = apply_U_paths(p.omega, p.b, s + t, f).function;
        group = std::max(group, max_abs_difference(us_ut, ust));
        domain = std::max(domain, boundary_defect(p.b, ut));
      }
      auto status = [](bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; };
      checks.push_back({"unitarity", status(unitarity <= tol), "max relative norm change " + fmt(unitarity)});
      checks.push_back({"group_law", status(group <= tol), "max pointwise difference " + fmt(group)});
      checks.push_back({"domain_invariance", status(domain <= 1e-8), "max boundary defect " + fmt(domain)});
    }
    const bool paths_ok = checks[2].status == CheckStatus::Pass;
    const bool trans_ok = checks[3].status == CheckStatus::Pass;
    r.report["consistent"] = spectral.verdict != SpectralVerdict::Undecided && paths_ok == spectral.spectral() &&
                             trans_ok == spectral.spectral();
    emit();
  });
}

CommandResult cmd_classify(const ProblemFile& file, const CommandOptions& opt) {
  ojson inputs = common_inputs(file, opt);
  return run("classify", file, opt, std::move(inputs), [&](const Problem& p, CommandResult& r) {
    const auto s = classify_structure(p.b);
    ojson weights = ojson::array();
    for (cplx w : s.weights) weights.push_back(to_json(w));
    r.report["structure"] = {{"kind", to_string(s.kind)},
                             {"sigma", s.sigma},
                             {"weights", std::move(weights)},
                             {"full_cycle", s.full_cycle},
                             {"multiplicative_for_all_t", s.multiplicative_group()},
                             {"forelli_for_all_t", s.forelli_group()}};
    const auto suite = structure_suite(p.omega, p.b, p.window, p.options, p.tolerances.structure);
    r.report["spectral_check"] = spectral_check_json(suite.spectral);
    ojson list = ojson::array();
    std::ostringstream csv;
    csv << "check,status,detail\n";
    for (const auto& c : suite.checks) {
      list.push_back(check_json(c));
      std::string detail = c.detail;
      std::replace(detail.begin(), detail.end(), ',', ';');
      csv << c.name << ',' << to_string(c.status) << ',' << detail << '\n';
    }
    r.report["checks"] = std::move(list);
    r.report["lattice_suite"] = suite.lattice ? lattice_json(*suite.lattice) : ojson(nullptr);
    r.csv = csv.str();
  });
}

CommandResult cmd_paths(const ProblemFile& file, const CommandOptions& opt) {
  ojson inputs = common_inputs(file, opt);
  inputs["x"] = opt.x;
  inputs["t"] = opt.t;
  return run("paths", file, opt, std::move(inputs), [&](const Problem& p, CommandResult& r) {
    r.report["predicted_paths"] = predicted_path_bound(p.omega, opt.t);
    const auto set = enumerate_paths(p.omega, p.b, opt.x, opt.t);
    r.report["start"] = set.start;
    r.report["count"] = set.paths.size();
    double probability = 0.0;
    ojson paths = ojson::array();
    std::ostringstream csv;
    csv << "word,end,remainder,weight_re,weight_im\n";
    for (const auto& path : set.paths) {
      probability += std::norm(path.weight);
      paths.push_back({{"word", path.word},
                       {"direction", path.direction == Direction::Forward ? "forward" : "backward"},
                       {"remainder", path.remainder},
                       {"end", path.end},
                       {"weight", to_json(path.weight)}});
      csv << word_string(path.word) << ',' << fmt(path.end) << ',' << fmt(path.remainder) << ','
          << fmt(path.weight.real()) << ',' << fmt(path.weight.imag()) << '\n';
    }
    r.report["probability_sum"] = probability;
    r.report["paths"] = std::move(paths);
    ojson ends = ojson::array();
    for (const auto& e : path_sum_by_end(set, p.omega))
      ends.push_back({{"end", e.end}, {"sum", to_json(e.sum)}, {"paths", e.paths}, {"near_collision", e.near_collision}});
    r.report["ends"] = std::move(ends);
    if (p.omega.locate(opt.x + opt.t)) {
      const auto id = local_translation_identities(p.omega, p.b, opt.x, opt.t, p.tolerances.structure);
      r.report["identities"] = {{"pass", id.pass},
                                {"target_reached", id.target_reached},
                                {"target_sum", to_json(id.target_sum)},
                                {"max_other", id.max_other}};
    } else {
      r.report["identities"] = nullptr;
    }
    r.csv = csv.str();
  });
}

CommandResult cmd_congruence(const ProblemFile& file, const CommandOptions& opt) {
  ojson inputs = common_inputs(file, opt);
  inputs["modulus"] = opt.modulus ? ojson(*opt.modulus) : ojson(nullptr);
  return run("congruence", file, opt, std::move(inputs), [&](const Problem& p, CommandResult& r) {
    const double a = opt.modulus.value_or(p.omega.measure());
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "modulus must be positive");
    const double tol = p.omega.tolerance();
    r.report["modulus"] = a;
    r.report["tiling"] = tiling_json(tiles_by_lattice(p.omega, a, tol));
    r.report["translates_disjoint"] = translates_disjoint(p.omega, a);
    const auto map = translation_congruence_to_interval(p.omega, a, tol);
    std::ostringstream csv;
    csv << "source,shift,image_lo,image_hi\n";
    if (map) {
      ojson pieces = ojson::array();
      for (const auto& piece : map->pieces) {
        pieces.push_back({{"source", piece.source}, {"shift", piece.shift}, {"image", interval_json(piece.image)}});
        csv << piece.source << ',' << fmt(piece.shift) << ',' << fmt(piece.image.lo) << ',' << fmt(piece.image.hi) << '\n';
      }
      r.report["congruence"] = {{"target", interval_json(map->target)}, {"pieces", std::move(pieces)}};
    } else {
      r.report["congruence"] = nullptr;
    }
    r.csv = csv.str();
  });
}

CommandResult run_command(const std::string& name, const ProblemFile& problem, const CommandOptions& options) {
  if (name == "spectrum") return cmd_spectrum(problem, options);
  if (name == "evolve") return cmd_evolve(problem, options);
  if (name == "verify") return cmd_verify(problem, options);
  if (name == "classify") return cmd_classify(problem, options);
  if (name == "paths") return cmd_paths(problem, options);
  if (name == "congruence") return cmd_congruence(problem, options);
  CommandResult r;
  r.exit_code = 1;
  r.report["command"] = name;
  r.report["status"] = "error";
  r.report["error"] = {{"code", "InvalidArgument"}, {"message", "unknown command"}};
  return r;
}

std::string csv_columns_help() {
  return "CSV columns (--format csv):\n"
         "  spectrum    lambda,dimension,constant,root_residual,eig_residual\n"
         "  evolve      x,re,im  (evolved function on the probe grid)\n"
         "  verify      check,status,detail\n"
         "  classify    check,status,detail\n"
         "  paths       word,end,remainder,weight_re,weight_im  (word indices are 0-based)\n"
         "  congruence  source,shift,image_lo,image_hi\n";
}

}  // namespace spi
