#include "magicmps/sweep.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace magicmps {

void parallel_for(std::size_t jobs, std::size_t n, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= n) break;
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<SweepPoint> sre_sweep(SpinChainModel::Kind kind, std::size_t n,
                                  const std::vector<double>& grid, const SweepOptions& opt) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] < grid[i - 1]) throw ConfigError("sre_sweep: grid must be sorted");

  std::vector<SweepPoint> out(grid.size());
  const std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
  const std::size_t chunk = (grid.size() + jobs - 1) / jobs;
  const std::size_t n_chunks = (grid.size() + chunk - 1) / chunk;

  // chunks walk the grid downward: the warm start then enters any
  // degenerate low-parameter phase continuously from the unique side,
  // instead of cold-starting inside it
  parallel_for(jobs, n_chunks, [&](std::size_t c) {
    std::optional<MatrixProductState> warm;
    std::size_t lo = c * chunk, hi = std::min(grid.size(), (c + 1) * chunk);
    for (std::size_t i = hi; i-- > lo;) {
      SpinChainModel model{kind, n, grid[i]};
      DmrgConfig cfg = opt.dmrg;
      cfg.seed = opt.dmrg.seed + i;  // decorrelate cold starts
      DmrgResult gs = dmrg_ground_state(model, cfg, warm);
      warm = gs.psi;

      SreResult sre = replica_sre(gs.psi, opt.renyi_n, opt.sre);
      SweepPoint& p = out[i];
      p.parameter = grid[i];
      p.m_n = sre.m_n / static_cast<double>(n);
      p.truncation_error = sre.build_error;
      for (double e : sre.apply_errors) p.truncation_error += e;
      p.chi_used = gs.psi.max_bond();
      p.energy = gs.energy;
    }
  });
  return out;
}

std::vector<double> finite_difference(const std::vector<double>& x, const std::vector<double>& y,
                                      int order) {
  if (order != 1 && order != 2) throw ConfigError("finite_difference: order must be 1 or 2");
  const std::size_t n = x.size();
  if (y.size() != n || n < 3) throw ConfigError("finite_difference: need >= 3 points");
  const double h = x[1] - x[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs((x[i + 1] - x[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ConfigError("finite_difference: grid must be uniform");

  std::vector<double> d(n);
  if (order == 1) {
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2 * h);
    d[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h);
    d[n - 1] = (3 * y[n - 1] - 4 * y[n - 2] + y[n - 3]) / (2 * h);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - 2 * y[i] + y[i - 1]) / (h * h);
    d[0] = (y[0] - 2 * y[1] + y[2]) / (h * h);
    d[n - 1] = (y[n - 1] - 2 * y[n - 2] + y[n - 3]) / (h * h);
  }
  return d;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& table) {
  std::ostringstream os;
  os.precision(12);
  os << "parameter,m_n,truncation_error,chi_used,energy\n";
  for (const auto& p : table)
    os << p.parameter << "," << p.m_n << "," << p.truncation_error << "," << p.chi_used << ","
       << p.energy << "\n";
  return os.str();
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (step <= 0 || hi < lo) throw ConfigError("uniform_grid: bad range");
  std::vector<double> g;
  for (double v = lo; v <= hi + 0.5 * step; v += step) g.push_back(v);
  return g;
}

}  // namespace magicmps
