// Solves one Poisson cube with both solver families and prints where the
// direct solver starts paying off as right-hand sides accumulate.

#include <cstdlib>
#include <iostream>

#include "sparsebench/sparsebench.hpp"

using namespace sparsebench;

int main(int argc, char** argv) {
  const Index side = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 16;
  const Index t = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 16;

  const AssembledSystem sys = assemble_fd_laplacian(RegularGrid3::cube(side), QuadHarmonicField{});
  std::cout << "cube " << side << "^3: n=" << sys.size() << " nnz=" << sys.A.nnz() << '\n';

  const LuFactors lu = factorize(sys.A, OrderingMethod::minimum_degree);
  const DenseVector xd = lu_solve(lu, sys.b);
  std::cout << "direct   fill=" << lu.stats.fill_nnz << " x_err=" << format_double(x_err(sys.ground_truth, xd))
            << " bytes=" << memory_estimate(lu) << '\n';

  const Preconditioner m = build_preconditioner(sys.A, PreconditionerKind::ilu0, 1);
  const IterativeResult it = bicgstab(sys.A, sys.b, m, {1e-10, 10000});
  std::cout << "bicgstab iterations=" << it.log.iterations
            << " x_err=" << format_double(x_err(sys.ground_truth, it.x))
            << " bytes=" << iterative_working_set(sys.A, m, bicgstab_vector_count()) << '\n';

  SolverSpec spec;
  spec.precond = PreconditionerKind::ilu0;
  spec.stop = {1e-10, 10000};
  const CrossoverMeasurement c = measure_crossover(sys, spec, t);
  std::cout << "t  direct_s  iterative_s\n";
  for (const auto& line : c.lines)
    std::cout << line.t << "  " << format_double(line.direct_measured_s) << "  "
              << format_double(line.iterative_measured_s) << '\n';
  if (c.estimate.finite())
    std::cout << "empirical t0 = " << format_double(c.estimate.t0) << '\n';
  else
    std::cout << "no crossover: " << to_string(c.estimate.kind) << '\n';
}
