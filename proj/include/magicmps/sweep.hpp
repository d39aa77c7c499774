#pragma once

#include <functional>

#include "magicmps/dmrg.hpp"
#include "magicmps/pauli_vector.hpp"

namespace magicmps {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions are
/// rethrown on the caller thread.
void parallel_for(std::size_t jobs, std::size_t n, const std::function<void(std::size_t)>& fn);

struct SweepPoint {
  double parameter = 0.0;
  double m_n = 0.0;  // SRE density M_n / N
  double truncation_error = 0.0;
  std::size_t chi_used = 0;
  double energy = 0.0;
};

struct SweepOptions {
  std::size_t renyi_n = 2;
  DmrgConfig dmrg;
  SreOptions sre;
  std::size_t jobs = 1;
};

/// Ground-state SRE density across a sorted parameter grid. Points are
/// processed in contiguous chunks so DMRG warm starts from the neighbor.
std::vector<SweepPoint> sre_sweep(SpinChainModel::Kind kind, std::size_t n,
                                  const std::vector<double>& grid, const SweepOptions& opt);

/// Uniform grid, step recorded by the caller; order 1 or 2 central
/// differences with one-sided ends.
std::vector<double> finite_difference(const std::vector<double>& x, const std::vector<double>& y,
                                      int order);

std::string sweep_to_csv(const std::vector<SweepPoint>& table);

std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace magicmps
