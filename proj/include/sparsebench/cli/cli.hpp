#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sparsebench/advisor/measure.hpp"
#include "sparsebench/advisor/recommend.hpp"
#include "sparsebench/metrics/experiment.hpp"

namespace sparsebench::cli {

struct ProblemFlags {
  std::optional<Index> cube;
  std::optional<std::string> mesh;
  std::optional<Index> tet;
  std::optional<std::string> matrix;
  double jitter = 0.0;
  std::uint64_t seed = 42;
  std::optional<std::string> field;
  bool mass_scale = false;

  ProblemSpec to_spec() const {
    const int sources = cube.has_value() + mesh.has_value() + tet.has_value() + matrix.has_value();
    if (sources != 1) throw CLI::ValidationError("exactly one of --cube, --mesh, --tet, --matrix is required");
    ProblemSpec spec;
    spec.seed = seed;
    spec.jitter = jitter;
    spec.field = field;
    spec.scale_by_mass = mass_scale;
    if (cube) {
      spec.source = ProblemSource::cube;
      spec.cube = *cube;
    } else if (tet) {
      spec.source = ProblemSource::jittered_mesh;
      spec.mesh_cells = *tet;
    } else if (mesh) {
      spec.source = ProblemSource::mesh_file;
      spec.path = *mesh;
    } else {
      spec.source = ProblemSource::matrix_file;
      spec.path = *matrix;
    }
    return spec;
  }
};

struct SolverFlags {
  std::string method = "bicgstab";
  std::string precond = "jacobi";
  Index blocks = 1;
  double eps = 1e-8;
  Index max_iter = 10000;
  Index restart = 30;
  std::string order = "mindeg";

  SolverSpec to_spec() const {
    SolverSpec s;
    s.method = parse_method(method);
    s.precond = parse_preconditioner(precond);
    s.blocks = blocks;
    s.stop = {eps, max_iter};
    s.restart = restart;
    s.ordering = parse_ordering(order);
    return s;
  }
};

inline void add_problem_flags(CLI::App& app, ProblemFlags& f) {
  app.add_option("--cube", f.cube, "Finite-difference cube with N nodes per axis")->check(CLI::Range(3, 1 << 20));
  app.add_option("--mesh", f.mesh, "Tetrahedral mesh file");
  app.add_option("--tet", f.tet, "Jittered lattice tet mesh with K cells per axis")->check(CLI::Range(2, 1 << 16));
  app.add_option("--matrix", f.matrix, "Matrix text file (b = A * ones)");
  app.add_option("--jitter", f.jitter, "Jitter fraction of the lattice spacing")->check(CLI::Range(0.0, 0.3));
  app.add_option("--seed", f.seed, "Random seed")->capture_default_str();
  app.add_option("--field", f.field, "Exact solution: linear | quad | trig");
  app.add_flag("--mass-scale", f.mass_scale, "Scale interior FEM rows by the inverse lumped mass");
}

inline void add_solver_flags(CLI::App& app, SolverFlags& f) {
  app.add_option("--method", f.method, "direct | bicgstab | gmres")->capture_default_str();
  app.add_option("--precond", f.precond, "none | jacobi | bjacobi | ilu0")->capture_default_str();
  app.add_option("--blocks", f.blocks, "Block-Jacobi block count")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--eps", f.eps, "Relative residual threshold, in (0, 1)")
      ->capture_default_str()
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            double v = 0.0;
            try {
              v = parse_double(s);
            } catch (const Error&) {
              return "not a number: " + s;
            }
            return v > 0.0 && v < 1.0 ? "" : "epsilon must lie in (0, 1)";
          },
          "(0,1)"));
  app.add_option("--max-iter", f.max_iter, "Iteration limit")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--restart", f.restart, "GMRES restart length")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--order", f.order, "Direct ordering: natural | mindeg")->capture_default_str();
}

struct OutputFlags {
  std::string format = "csv";
  std::optional<std::string> out;
};

inline void add_output_flags(CLI::App& app, OutputFlags& f) {
  app.add_option("--format", f.format, "csv | json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", f.out, "Output path (default: standard output)");
}

/// Writes through `emit` to --out or to `out`.
template <class Emit>
void write_output(const OutputFlags& flags, std::ostream& out, Emit&& emit) {
  if (!flags.out) {
    emit(out);
    return;
  }
  std::ofstream file(*flags.out);
  if (!file) detail::fail(ErrorCode::io_error, "cannot open " + *flags.out + " for writing");
  emit(file);
  file.flush();
  if (!file) detail::fail(ErrorCode::io_error, "write failed: " + *flags.out);
}

inline std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

/// Parses CLI-style words (no program name) into `app`.
inline void parse_words(CLI::App& app, const std::vector<std::string>& words) {
  std::vector<std::string> reversed(words.rbegin(), words.rend());
  app.parse(reversed);
}

/// One experiment cell per non-empty line, using `solve` flags plus --rhs
/// and --reps. Lines starting with '#' are comments.
inline ExperimentPlan read_plan(std::istream& in) {
  ExperimentPlan plan;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    CLI::App app("plan line");
    ProblemFlags pf;
    SolverFlags sf;
    Index rhs = 1, reps = 1;
    add_problem_flags(app, pf);
    add_solver_flags(app, sf);
    app.add_option("--rhs", rhs)->check(CLI::PositiveNumber);
    app.add_option("--reps", reps)->check(CLI::PositiveNumber);
    try {
      parse_words(app, split_words(line));
      plan.cells.push_back({pf.to_spec(), sf.to_spec(), rhs, reps});
    } catch (const CLI::ParseError& e) {
      throw IndexedError(ErrorCode::parse_error, line_no, std::string("plan line: ") + e.what());
    }
  }
  return plan;
}

inline std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

inline nlohmann::json to_json(const CrossoverMeasurement& m) {
  nlohmann::json j;
  j["t_fact"] = m.times.t_fact;
  j["t_slu_solve"] = m.times.t_slu_solve;
  j["t_pc"] = m.times.t_pc;
  j["t_is_solve"] = m.times.t_is_solve;
  j["t0_kind"] = to_string(m.estimate.kind);
  j["t0"] = m.estimate.finite() ? nlohmann::json(m.estimate.t0) : nlohmann::json(nullptr);
  j["direct_faster_above_t0"] = m.estimate.direct_faster_above;
  j["direct_max_x_err"] = m.direct_max_x_err;
  j["iterative_max_x_err"] = m.iterative_max_x_err;
  j["iterative_converged"] = m.iterative_converged;
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : m.lines)
    lines.push_back({{"t", l.t},
                     {"direct_s", l.direct_model_s},
                     {"iterative_s", l.iterative_model_s},
                     {"direct_measured_s", l.direct_measured_s},
                     {"iterative_measured_s", l.iterative_measured_s}});
  j["lines"] = lines;
  return j;
}

inline void write_crossover_csv(std::ostream& out, const CrossoverMeasurement& m) {
  out << "# t_fact=" << format_double(m.times.t_fact) << " t_slu_solve=" << format_double(m.times.t_slu_solve)
      << " t_pc=" << format_double(m.times.t_pc) << " t_is_solve=" << format_double(m.times.t_is_solve) << '\n';
  out << "# t0_kind=" << to_string(m.estimate.kind)
      << " t0=" << (m.estimate.finite() ? format_double(m.estimate.t0) : std::string()) << '\n';
  out << "t,direct_s,iterative_s,direct_measured_s,iterative_measured_s\n";
  for (const auto& l : m.lines)
    out << l.t << ',' << format_double(l.direct_model_s) << ',' << format_double(l.iterative_model_s) << ','
        << format_double(l.direct_measured_s) << ',' << format_double(l.iterative_measured_s) << '\n';
}

/// Runs the command line `args` (without the program name). Returns the
/// process exit code; usage and runtime errors print one line to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Sparse direct and iterative solver benchmark", "sparsebench");
  app.require_subcommand(1);

  ProblemFlags problem;
  SolverFlags solver;
  OutputFlags output;
  Index rhs = 1;

  auto* gen = app.add_subcommand("gen", "Assemble a system and write the matrix (and mesh) files");
  std::string gen_prefix = "system";
  add_problem_flags(*gen, problem);
  gen->add_option("--out", gen_prefix, "Output prefix: PREFIX.mtx and, for meshes, PREFIX.mesh")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solve one system and print its report");
  add_problem_flags(*solve, problem);
  add_solver_flags(*solve, solver);
  add_output_flags(*solve, output);
  solve->add_option("--rhs", rhs, "Number of right-hand sides")->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("bench", "Run an experiment plan file");
  std::string plan_path;
  bench->add_option("--plan", plan_path, "Plan file, one solve command per line")->required();
  add_output_flags(*bench, output);

  auto* crossover = app.add_subcommand("crossover", "Measure the direct/iterative crossover over a rhs family");
  Index family = 16;
  add_problem_flags(*crossover, problem);
  add_solver_flags(*crossover, solver);
  add_output_flags(*crossover, output);
  crossover->add_option("--rhs", family, "Right-hand sides in the family")->capture_default_str()->check(CLI::PositiveNumber);

  auto* advise = app.add_subcommand("advise", "Recommend a solver family for the given requirements");
  Requirements req;
  double accuracy = 1e-8, mem = 8e9;
  Index adv_rhs = 1, adv_n = 0, adv_nnz = 0, kmax = 128;
  std::optional<Index> adv_cube;
  std::vector<double> times;
  bool irregular = false;
  advise->add_option("--accuracy", accuracy, "Target relative accuracy")->capture_default_str();
  advise->add_option("--mem", mem, "Memory budget in bytes")->capture_default_str();
  advise->add_option("--rhs", adv_rhs, "Number of right-hand sides")->capture_default_str()->check(CLI::PositiveNumber);
  advise->add_option("--cube", adv_cube, "Take n and nnz from an N^3 finite-difference cube")->check(CLI::Range(3, 1 << 20));
  advise->add_option("--n", adv_n, "Unknowns (default: 16^3 cube)");
  advise->add_option("--nnz", adv_nnz, "Matrix nonzeros (default: 16^3 cube)");
  advise->add_option("--kmax", kmax, "Largest iteration count, for the analytic t0")->capture_default_str();
  advise->add_option("--phi", req.phi_n, "Preconditioner setup cost in operations")->capture_default_str();
  advise->add_option("--fill-factor", req.fill_factor, "LU fill factor over nnz")->capture_default_str();
  advise->add_option("--times", times, "Measured T_fact T_slu_solve T_pc T_is_solve")->expected(4);
  advise->add_flag("--irregular", irregular, "Problem comes from an irregular mesh");

  try {
    parse_words(app, args);

    if (gen->parsed()) {
      const ProblemSpec spec = problem.to_spec();
      AssembledSystem sys;
      std::string mesh_path;
      if (spec.source == ProblemSource::jittered_mesh) {
        TetMesh mesh = generate_jittered_tet_mesh(spec.mesh_cells, spec.jitter, spec.seed);
        mesh_path = gen_prefix + ".mesh";
        write_mesh_file(mesh_path, mesh);
        sys = assemble_fem_laplacian(mesh, parse_field(spec.field.value_or("linear")), spec.scale_by_mass);
      } else {
        sys = build_problem(spec);
      }
      const std::string matrix_path = gen_prefix + ".mtx";
      write_matrix_file(matrix_path, sys.A);
      out << "problem=" << spec.name() << " n=" << sys.A.n_rows() << " nnz=" << sys.A.nnz()
          << " matrix=" << matrix_path;
      if (!mesh_path.empty()) out << " mesh=" << mesh_path;
      out << '\n';
      return 0;
    }

    if (solve->parsed()) {
      ExperimentCell cell{problem.to_spec(), solver.to_spec(), rhs, 1};
      const AssembledSystem sys = build_problem(cell.problem);
      SolveReport report = run_cell_once(sys, cell).report;
      write_output(output, out, [&](std::ostream& os) {
        emit_report({report}, parse_report_format(output.format), os);
      });
      if (!report.converged) err << "error: " << one_line(report.error_message.empty() ? report.error : report.error_message) << '\n';
      return report.converged ? 0 : 1;
    }

    if (bench->parsed()) {
      std::ifstream in(plan_path);
      if (!in) detail::fail(ErrorCode::io_error, "cannot open plan " + plan_path);
      const auto reports = run_experiments(read_plan(in));
      write_output(output, out, [&](std::ostream& os) {
        emit_report(reports, parse_report_format(output.format), os);
      });
      return 0;
    }

    if (crossover->parsed()) {
      const AssembledSystem sys = build_problem(problem.to_spec());
      const CrossoverMeasurement m = measure_crossover(sys, solver.to_spec(), family);
      write_output(output, out, [&](std::ostream& os) {
        if (output.format == "json")
          os << to_json(m).dump(2) << '\n';
        else
          write_crossover_csv(os, m);
      });
      return 0;
    }

    if (advise->parsed()) {
      req.accuracy = accuracy;
      req.memory_budget_bytes = mem;
      req.rhs_count = adv_rhs;
      req.regular_grid = !irregular;
      req.k_max = kmax;
      const Index side = adv_cube.value_or(16);
      req.n = adv_n != 0 ? adv_n : side * side * side;
      req.nnz = adv_nnz != 0 ? adv_nnz : fd_laplacian_nnz(side, side, side);
      if (!times.empty()) req.measured = CrossoverInput{times[0], times[1], times[2], times[3]};
      out << to_json(recommend(req)).dump(2) << '\n';
      return 0;
    }
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << one_line(e.what()) << '\n';
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 2;
}

}  // namespace sparsebench::cli
