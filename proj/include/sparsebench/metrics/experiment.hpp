#pragma once

#include <string>
#include <vector>

#include "sparsebench/direct/pipeline.hpp"
#include "sparsebench/iterative/krylov.hpp"
#include "sparsebench/metrics/report_io.hpp"
#include "sparsebench/problem/fem.hpp"
#include "sparsebench/problem/grid.hpp"
#include "sparsebench/problem/rhs_family.hpp"

namespace sparsebench {

enum class ProblemSource { cube, jittered_mesh, mesh_file, matrix_file };

/// Where a system comes from. Exactly one source is active.
struct ProblemSpec {
  ProblemSource source = ProblemSource::cube;
  Index cube = 16;
  Index mesh_cells = 8;
  double jitter = 0.0;
  std::uint64_t seed = 42;
  std::string path;
  std::optional<std::string> field;  // default: quad on grids, linear on meshes
  bool scale_by_mass = false;

  std::string name() const {
    switch (source) {
      case ProblemSource::cube: return "cube" + std::to_string(cube);
      case ProblemSource::jittered_mesh: {
        return "tet" + std::to_string(mesh_cells) + "-j" + format_double(jitter) + "-s" + std::to_string(seed);
      }
      case ProblemSource::mesh_file: return "mesh:" + path;
      case ProblemSource::matrix_file: return "matrix:" + path;
    }
    return "";
  }
};

/// Builds the system. Matrix files get b = A * ones and ground truth ones.
inline AssembledSystem build_problem(const ProblemSpec& spec) {
  switch (spec.source) {
    case ProblemSource::cube:
      return assemble_fd_laplacian(RegularGrid3::cube(spec.cube), parse_field(spec.field.value_or("quad")));
    case ProblemSource::jittered_mesh:
      return assemble_fem_laplacian(generate_jittered_tet_mesh(spec.mesh_cells, spec.jitter, spec.seed),
                                    parse_field(spec.field.value_or("linear")), spec.scale_by_mass);
    case ProblemSource::mesh_file:
      return assemble_fem_laplacian(read_mesh_file(spec.path), parse_field(spec.field.value_or("linear")),
                                    spec.scale_by_mass);
    case ProblemSource::matrix_file: {
      AssembledSystem sys;
      sys.A = read_matrix_file(spec.path);
      detail::require(sys.A.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
      sys.ground_truth.assign(sys.A.n_rows(), 1.0);
      sys.b = spmv(sys.A, sys.ground_truth);
      return sys;
    }
  }
  detail::fail(ErrorCode::invalid_argument, "unknown problem source");
}

enum class SolverMethod { direct, bicgstab, gmres };

inline std::string to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::direct: return "direct";
    case SolverMethod::bicgstab: return "bicgstab";
    case SolverMethod::gmres: return "gmres";
  }
  return "";
}

inline SolverMethod parse_method(const std::string& s) {
  if (s == "direct") return SolverMethod::direct;
  if (s == "bicgstab") return SolverMethod::bicgstab;
  if (s == "gmres") return SolverMethod::gmres;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + s + "'");
}

struct SolverSpec {
  SolverMethod method = SolverMethod::bicgstab;
  PreconditionerKind precond = PreconditionerKind::jacobi;
  Index blocks = 1;
  OrderingMethod ordering = OrderingMethod::minimum_degree;
  Index restart = 30;
  StoppingCriterion stop;
};

struct ExperimentCell {
  ProblemSpec problem;
  SolverSpec solver;
  Index t_rhs = 1;
  Index repetitions = 1;
};

struct ExperimentPlan {
  std::vector<ExperimentCell> cells;

  void validate() const {
    for (const auto& c : cells) {
      detail::require(c.repetitions >= 1, ErrorCode::invalid_argument, "repetitions must be at least 1");
      detail::require(c.t_rhs >= 1, ErrorCode::invalid_argument, "t_rhs must be at least 1");
    }
  }
};

struct CellOutcome {
  SolveReport report;
  DenseBlock solution;
};

/// Right-hand sides and exact solutions for t columns: the system's own b
/// when t == 1, the rotating-plane family otherwise.
inline std::pair<DenseBlock, DenseBlock> rhs_with_truth(const AssembledSystem& sys, Index t) {
  if (t == 1) return {DenseBlock::from_columns({sys.b}), DenseBlock::from_columns({sys.ground_truth})};
  detail::require(sys.nodes.size() == sys.size(), ErrorCode::invalid_argument,
                  "multiple right-hand sides need node geometry");
  return {make_rhs_family(sys, t), rhs_family_ground_truth(sys, t)};
}

/// Preconditioner setup followed by one Krylov solve per column. Unconverged
/// columns keep their best iterate and mark the report unconverged.
inline CellOutcome iterative_pipeline(const CsrMatrix& a, const DenseBlock& rhs, const SolverSpec& spec,
                                      const DenseBlock* ground_truth = nullptr) {
  CellOutcome out;
  SolveReport& r = out.report;
  r.solver = to_string(spec.method);
  r.precond = to_string(spec.precond);
  if (spec.precond == PreconditionerKind::block_jacobi) r.blocks = spec.blocks;
  r.epsilon = spec.stop.epsilon;
  r.n = a.n_rows();
  r.nnz = a.nnz();
  r.t_rhs = rhs.n_cols();

  const Preconditioner m = build_preconditioner(a, spec.precond, spec.blocks);
  r.precond_s = m.setup_seconds();
  out.solution = DenseBlock(rhs.n_rows(), rhs.n_cols());
  double solve_s = 0.0;
  Index max_iterations = 0;
  bool all_converged = true;
  for (Index k = 0; k < rhs.n_cols(); ++k) {
    IterationLog log;
    DenseVector x;
    try {
      auto res = spec.method == SolverMethod::gmres ? gmres(a, rhs.column(k), m, spec.stop, spec.restart)
                                                    : bicgstab(a, rhs.column(k), m, spec.stop);
      x = std::move(res.x);
      log = std::move(res.log);
    } catch (const SolveFailure& e) {
      x = e.best_iterate();
      log = e.log();
      all_converged = false;
      if (r.error.empty()) {
        r.error = std::string(to_string(e.code()));
        r.error_message = e.what();
      }
    }
    solve_s += log.solve_time;
    r.flops += log.solve_flops;
    max_iterations = std::max(max_iterations, log.iterations);
    out.solution.set_column(k, x);
  }
  r.solve_s = solve_s;
  r.iterations = max_iterations;
  const Index vectors = spec.method == SolverMethod::gmres ? gmres_vector_count(spec.restart) : bicgstab_vector_count();
  r.mem_bytes = iterative_working_set(a, m, vectors) + 2 * memory_estimate(rhs);
  r.residual = max_relative_residual(a, rhs, out.solution);
  if (ground_truth != nullptr) r.x_err = max_x_err(*ground_truth, out.solution);
  r.converged = all_converged;
  finalize_timing(r);
  return out;
}

inline CellOutcome run_cell_once(const AssembledSystem& sys, const ExperimentCell& cell) {
  auto [rhs, truth] = rhs_with_truth(sys, cell.t_rhs);
  CellOutcome out;
  if (cell.solver.method == SolverMethod::direct) {
    auto run = direct_pipeline(sys.A, rhs, cell.solver.ordering, &truth);
    out.report = std::move(run.report);
    out.solution = std::move(run.solution);
  } else {
    out = iterative_pipeline(sys.A, rhs, cell.solver, &truth);
  }
  out.report.problem = cell.problem.name();
  return out;
}

/// Runs every cell in order, one at a time. Each cell keeps its fastest
/// repetition; errors are recorded in that cell's report and the run goes on.
inline std::vector<SolveReport> run_experiments(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<SolveReport> reports;
  reports.reserve(plan.cells.size());
  for (const auto& cell : plan.cells) {
    Index n = 0, nnz = 0;
    try {
      const AssembledSystem sys = build_problem(cell.problem);
      n = sys.A.n_rows();
      nnz = sys.A.nnz();
      std::optional<CellOutcome> best;
      for (Index rep = 0; rep < cell.repetitions; ++rep) {
        CellOutcome out = run_cell_once(sys, cell);
        if (!best || *out.report.total_s < *best->report.total_s) best = std::move(out);
      }
      reports.push_back(std::move(best->report));
    } catch (const Error& e) {
      SolveReport r;
      r.problem = cell.problem.name();
      r.solver = to_string(cell.solver.method);
      if (cell.solver.method != SolverMethod::direct) {
        r.precond = to_string(cell.solver.precond);
        r.epsilon = cell.solver.stop.epsilon;
        if (cell.solver.precond == PreconditionerKind::block_jacobi) r.blocks = cell.solver.blocks;
      }
      r.n = n;
      r.nnz = nnz;
      r.t_rhs = cell.t_rhs;
      r.error = std::string(to_string(e.code()));
      r.error_message = e.what();
      r.converged = false;
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

}  // namespace sparsebench
