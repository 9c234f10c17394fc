#pragma once

#include "sparsebench/core/csr.hpp"
#include "sparsebench/core/dense.hpp"
#include "sparsebench/core/error.hpp"
#include "sparsebench/core/permutation.hpp"
#include "sparsebench/core/text_io.hpp"
#include "sparsebench/problem/analytic_field.hpp"
#include "sparsebench/problem/fem.hpp"
#include "sparsebench/problem/grid.hpp"
#include "sparsebench/problem/rhs_family.hpp"
#include "sparsebench/problem/system.hpp"
#include "sparsebench/problem/tet_mesh.hpp"
#include "sparsebench/direct/lu.hpp"
#include "sparsebench/direct/ordering.hpp"
#include "sparsebench/direct/pipeline.hpp"
#include "sparsebench/direct/symbolic.hpp"
#include "sparsebench/iterative/krylov.hpp"
#include "sparsebench/iterative/preconditioner.hpp"
#include "sparsebench/metrics/experiment.hpp"
#include "sparsebench/metrics/memory.hpp"
#include "sparsebench/metrics/metrics.hpp"
#include "sparsebench/metrics/report_io.hpp"
#include "sparsebench/metrics/solve_report.hpp"
#include "sparsebench/advisor/crossover.hpp"
#include "sparsebench/advisor/measure.hpp"
#include "sparsebench/advisor/recommend.hpp"
