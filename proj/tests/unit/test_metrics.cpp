#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "sparsebench/sparsebench.hpp"

using namespace sparsebench;

namespace {

const AssembledSystem& cube16() {
  static const AssembledSystem s = assemble_fd_laplacian(RegularGrid3::cube(16), QuadHarmonicField{});
  return s;
}

double oracle_x_err(const std::vector<double>& gt, const std::vector<double>& x) {
  long double d = 0, r = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    d += (long double)(gt[i] - x[i]) * (gt[i] - x[i]);
    r += (long double)gt[i] * gt[i];
  }
  return static_cast<double>(std::sqrt(d / r));
}

SolveReport sample_report() {
  SolveReport r;
  r.problem = "cube16";
  r.solver = "bicgstab";
  r.precond = "bjacobi";
  r.blocks = 16;
  r.epsilon = 1e-12;
  r.n = 4096;
  r.nnz = 20560;
  r.t_rhs = 3;
  r.precond_s = 0.1 + 0.2;
  r.solve_s = 1.0 / 3.0;
  r.total_s = r.precond_s.value() + r.solve_s.value();
  r.flops = 123456789012345ull;
  r.iterations = 45;
  r.mem_bytes = 987654;
  r.x_err = 3.0000000000000004e-13;
  r.residual = 7.77e-13;
  r.converged = true;
  r.ordering = "mindeg";
  r.flop_rate = 1.2345678901234567e9;
  r.error = "";
  return r;
}

ExperimentCell cube_cell(Index side, SolverMethod method) {
  ExperimentCell c;
  c.problem.source = ProblemSource::cube;
  c.problem.cube = side;
  c.solver.method = method;
  return c;
}

std::string temp_path(const std::string& name) { return testing::TempDir() + "/" + name; }

}  // namespace

TEST(XErr, IdenticalVectorsGiveZero) {
  const std::vector<double> v{1.5, -2.0, 3.25};
  EXPECT_EQ(x_err(v, v), 0.0);
}

TEST(XErr, ZeroComputedGivesOne) {
  EXPECT_EQ(x_err(std::vector<double>{1, 0}, std::vector<double>{0, 0}), 1.0);
}

TEST(XErr, ThreeFourExample) {
  EXPECT_NEAR(x_err(std::vector<double>{3, 4}, std::vector<double>{3.3, 4.4}), 0.1, 1e-15);
}

TEST(XErr, ZeroGroundTruthRejected) {
  try {
    x_err(std::vector<double>{0, 0}, std::vector<double>{1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_ground_truth);
  }
}

TEST(XErr, LengthMismatchRejected) {
  EXPECT_THROW(x_err(std::vector<double>{1, 2}, std::vector<double>{1}), Error);
}

TEST(XErr, MatchesExtendedPrecisionOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + rng() % 200;
    auto gt = testkit::random_vector(rng, n);
    auto x = testkit::random_vector(rng, n);
    if (trial % 2) for (Index i = 0; i < n; ++i) x[i] = gt[i] * (1 + 1e-9 * x[i]);
    const double ref = oracle_x_err(gt, x);
    EXPECT_NEAR(x_err(gt, x), ref, 1e-14 * std::max(1.0, ref));
  }
}

TEST(XErr, ScaleInvariant) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> scale(-1e3, 1e3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + rng() % 50;
    auto gt = testkit::random_vector(rng, n);
    auto x = testkit::random_vector(rng, n);
    double c = scale(rng);
    if (c == 0.0) c = 1.0;
    std::vector<double> cg(n), cx(n);
    for (Index i = 0; i < n; ++i) cg[i] = c * gt[i], cx[i] = c * x[i];
    const double base = x_err(gt, x);
    EXPECT_NEAR(x_err(cg, cx), base, 1e-15 * std::max(1.0, base));
  }
}

TEST(Efficiency, PerfectHalving) {
  EXPECT_DOUBLE_EQ(efficiency({{1, 10.0}, {2, 5.0}}).at(2), 100.0);
}

TEST(Efficiency, BaselineTwo) {
  EXPECT_DOUBLE_EQ(efficiency({{2, 100.0}, {4, 50.0}}, 2).at(4), 100.0);
}

TEST(Efficiency, NoSpeedupIsFiftyPercent) {
  EXPECT_DOUBLE_EQ(efficiency({{1, 10.0}, {2, 10.0}}).at(2), 50.0);
}

TEST(Efficiency, BaselineIsExactlyHundred) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(1e-6, 1e4);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<Index, double> times;
    const Index base = 1 + rng() % 8;
    times[base] = t(rng);
    for (int k = 0; k < 4; ++k) times[base + 1 + rng() % 100] = t(rng);
    EXPECT_EQ(efficiency(times, base).at(base), 100.0);
    EXPECT_EQ(flops_efficiency(times, base).at(base), 100.0);
  }
}

TEST(Efficiency, MissingBaseline) {
  for (auto call : {+[] { efficiency({{2, 1.0}}, 1); }, +[] { efficiency({}); },
                    +[] { flops_efficiency({{4, 1.0}}, 2); }, +[] { flops_efficiency({}); }}) {
    try {
      call();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::missing_baseline);
    }
  }
}

TEST(FlopsEfficiency, Examples) {
  EXPECT_DOUBLE_EQ(flops_efficiency({{1, 1.0}, {4, 4.0}}).at(4), 100.0);
  EXPECT_DOUBLE_EQ(flops_efficiency({{1, 1.0}, {4, 2.0}}).at(4), 50.0);
}

TEST(FlopsEfficiency, BaselineTwoAt576Units) {
  const double e = flops_efficiency({{2, 32.0}, {576, 1033.0}}, 2).at(576);
  EXPECT_NEAR(e, 1033.0 / 32.0 / 288.0 * 100.0, 1e-12);
  EXPECT_NEAR(e, 11.2, 0.05);
}

TEST(Memory, CsrFormula) {
  const CsrMatrix a = testkit::tridiagonal(4, 2.0, -1.0);
  ASSERT_EQ(a.nnz(), 10u);
  EXPECT_EQ(memory_estimate(a), 200u);
}

TEST(Memory, DenseBlockFormula) { EXPECT_EQ(memory_estimate(DenseBlock(100, 3)), 2400u); }

TEST(Memory, LuIsAdditive) {
  const LuFactors f = factorize(testkit::laplacian_1d(30), OrderingMethod::minimum_degree);
  EXPECT_EQ(memory_estimate(f), memory_estimate(f.L) + memory_estimate(f.U) + 16 * 30);
}

TEST(Memory, PreconditionersAreAdditive) {
  const CsrMatrix& a = cube16().A;
  EXPECT_EQ(memory_estimate(build_identity(a)), 0u);
  EXPECT_EQ(memory_estimate(build_jacobi(a)), 8 * a.n_rows());
  const Preconditioner bj = build_block_jacobi(a, 4);
  std::uint64_t sum = 0;
  for (const auto& b : std::get<BlockJacobiPreconditioner>(bj.impl()).blocks) sum += memory_estimate(b);
  EXPECT_EQ(memory_estimate(bj), sum);
  const Preconditioner ilu = build_ilu0(a);
  const auto& fac = std::get<Ilu0Preconditioner>(ilu.impl()).factors;
  EXPECT_EQ(memory_estimate(ilu), memory_estimate(fac));
  EXPECT_EQ(iterative_working_set(a, ilu, 8), memory_estimate(a) + memory_estimate(ilu) + 64 * a.n_rows());
}

TEST(Memory, LuDwarfsIterativeWorkingSet) {
  const CsrMatrix& a = cube16().A;
  const LuFactors f = factorize(a, OrderingMethod::minimum_degree);
  const Preconditioner m = build_ilu0(a);
  EXPECT_GE(memory_estimate(f), 3 * iterative_working_set(a, m, 8));
}

TEST(RunExperiments, OneCellOneReport) {
  ExperimentPlan plan;
  plan.cells.push_back(cube_cell(6, SolverMethod::bicgstab));
  const auto reports = run_experiments(plan);
  ASSERT_EQ(reports.size(), 1u);
  const SolveReport& r = reports[0];
  EXPECT_EQ(r.problem, "cube6");
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.mem_bytes, 0u);
  EXPECT_GE(*r.x_err, 0.0);
  EXPECT_TRUE(r.error.empty());
}

TEST(RunExperiments, RepetitionsAreDeterministic) {
  for (SolverMethod method : {SolverMethod::direct, SolverMethod::bicgstab, SolverMethod::gmres}) {
    ExperimentCell cell = cube_cell(8, method);
    const AssembledSystem sys = build_problem(cell.problem);
    const CellOutcome a = run_cell_once(sys, cell);
    const CellOutcome b = run_cell_once(sys, cell);
    for (Index k = 0; k < a.solution.n_cols(); ++k)
      for (Index i = 0; i < a.solution.n_rows(); ++i) ASSERT_EQ(a.solution(i, k), b.solution(i, k));
    EXPECT_EQ(a.report.flops, b.report.flops);
    EXPECT_EQ(a.report.iterations, b.report.iterations);

    cell.repetitions = 2;
    ExperimentPlan plan{{cell}};
    const SolveReport r = run_experiments(plan).at(0);
    EXPECT_EQ(r.x_err, a.report.x_err);
    EXPECT_EQ(r.flops, a.report.flops);
    EXPECT_GT(*r.total_s, 0.0);
  }
}

TEST(RunExperiments, SingularCellRecordedAndRunContinues) {
  const std::string path = temp_path("singular.mtx");
  {
    std::ofstream out(path);
    out << "3 3 4\n0 0 1\n0 1 2\n1 0 3\n1 1 4\n";
  }
  ExperimentPlan plan;
  ExperimentCell bad = cube_cell(4, SolverMethod::direct);
  bad.problem.source = ProblemSource::matrix_file;
  bad.problem.path = path;
  plan.cells.push_back(bad);
  plan.cells.push_back(cube_cell(5, SolverMethod::direct));
  const auto reports = run_experiments(plan);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_FALSE(reports[0].converged);
  EXPECT_FALSE(reports[0].error.empty());
  EXPECT_EQ(reports[0].n, 3u);
  EXPECT_TRUE(reports[1].converged);
  EXPECT_TRUE(reports[1].error.empty());
  std::filesystem::remove(path);
}

TEST(RunExperiments, InvalidPlanRejected) {
  ExperimentCell cell = cube_cell(4, SolverMethod::direct);
  cell.repetitions = 0;
  EXPECT_THROW(run_experiments(ExperimentPlan{{cell}}), Error);
}

TEST(ReportCsv, EmptyListIsHeaderOnly) {
  std::ostringstream out;
  write_csv(out, {});
  EXPECT_EQ(out.str(), std::string(kReportCsvHeader) + "\n");
}

TEST(ReportCsv, HeaderHasTwentyOneColumnsInOrder) {
  EXPECT_EQ(std::string(kReportCsvHeader),
            "problem,solver,precond,blocks,epsilon,n,nnz,t_rhs,order_s,symbolic_s,factor_s,precond_s,solve_s,"
            "total_s,flops,iterations,fill_density,mem_bytes,x_err,residual,converged");
}

TEST(ReportCsv, OneReportIsTwoLines) {
  std::ostringstream out;
  write_csv(out, {sample_report()});
  const std::string s = out.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2);
  const std::string row = s.substr(s.find('\n') + 1);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 20);
}

TEST(ReportCsv, MissingFieldsAreEmpty) {
  SolveReport r;
  r.problem = "p";
  r.solver = "direct";
  std::ostringstream out;
  write_csv(out, {r});
  const std::string row = out.str().substr(out.str().find('\n') + 1);
  EXPECT_EQ(row, "p,direct,,,,0,0,1,,,,,,,0,,,0,,,false\n");
}

TEST(ReportCsv, RoundTripKeepsCsvFields) {
  SolveReport r = sample_report();
  r.problem = "mesh:a,\"b\".mesh";
  std::ostringstream out;
  write_csv(out, {r});
  std::istringstream in(out.str());
  const auto back = read_csv(in);
  ASSERT_EQ(back.size(), 1u);
  SolveReport expect = r;
  expect.ordering.clear();
  expect.flop_rate.reset();
  expect.error.clear();
  expect.error_message.clear();
  expect.timer_resolution_s = back[0].timer_resolution_s;
  EXPECT_EQ(back[0], expect);
}

TEST(ReportCsv, BadRowReportsLine) {
  std::istringstream in(std::string(kReportCsvHeader) + "\na,b\n");
  try {
    read_csv(in);
    FAIL();
  } catch (const IndexedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(ReportJson, RoundTripIsFieldEqual) {
  SolveReport with_error = sample_report();
  with_error.error = "zero_pivot";
  with_error.error_message = "pivot 3 is zero";
  with_error.iterations.reset();
  std::ostringstream out;
  write_json(out, {sample_report(), with_error, SolveReport{}});
  std::istringstream in(out.str());
  const auto back = read_json(in);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0], sample_report());
  EXPECT_EQ(back[1], with_error);
  EXPECT_EQ(back[2], SolveReport{});
}

TEST(ReportJson, RandomReportsRoundTripBitExact) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<SolveReport> reports;
  for (int k = 0; k < 40; ++k) {
    SolveReport r = sample_report();
    r.solve_s = std::pow(10.0, u(rng));
    r.x_err = std::pow(10.0, u(rng)) * 1.0000000000000002;
    r.residual = std::nextafter(std::pow(10.0, u(rng)), 0.0);
    r.flops = rng();
    reports.push_back(r);
  }
  for (ReportFormat fmt : {ReportFormat::csv, ReportFormat::json}) {
    const std::string path = temp_path(fmt == ReportFormat::csv ? "r.csv" : "r.json");
    emit_report(reports, fmt, path);
    const auto back = read_report_file(path, fmt);
    ASSERT_EQ(back.size(), reports.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i].solve_s, reports[i].solve_s);
      EXPECT_EQ(back[i].x_err, reports[i].x_err);
      EXPECT_EQ(back[i].residual, reports[i].residual);
      EXPECT_EQ(back[i].flops, reports[i].flops);
    }
    std::filesystem::remove(path);
  }
}

TEST(ReportIo, UnwritablePathIsIoError) {
  try {
    emit_report({}, ReportFormat::csv, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io_error);
  }
}

TEST(Timing, TotalIsSumOfPhases) {
  SolveReport r;
  r.order_s = 0.25;
  r.factor_s = 0.5;
  r.solve_s = 0.125;
  r.flops = 875;
  finalize_timing(r);
  EXPECT_EQ(*r.total_s, 0.875);
  EXPECT_EQ(*r.flop_rate, 1000.0);
}
