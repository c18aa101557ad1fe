#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "padmm/cli.hpp"
#include "padmm/errors.hpp"

namespace padmm::cli {

std::vector<std::vector<ProfilePoint>> performance_profile(
    const std::vector<std::vector<double>>& costs) {
  if (costs.empty()) throw InvalidInputError("profile needs at least one instance");
  const std::size_t solvers = costs.front().size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> ratios(costs.size(), std::vector<double>(solvers, inf));
  std::vector<double> grid{1.0};
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i].size() != solvers) throw InvalidInputError("ragged cost table");
    double best = inf;
    for (double c : costs[i])
      if (std::isfinite(c)) best = std::min(best, c);
    if (!std::isfinite(best)) continue;
    for (std::size_t s = 0; s < solvers; ++s) {
      const double c = costs[i][s];
      if (!std::isfinite(c)) continue;
      // A zero best cost only ties with zero.
      const double r = best > 0.0 ? c / best : (c == best ? 1.0 : inf);
      ratios[i][s] = r;
      if (std::isfinite(r)) grid.push_back(r);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const double count = static_cast<double>(costs.size());
  std::vector<std::vector<ProfilePoint>> out(solvers);
  for (std::size_t s = 0; s < solvers; ++s) {
    std::vector<double> mine;
    for (const auto& row : ratios) mine.push_back(row[s]);
    std::sort(mine.begin(), mine.end());
    for (double x : grid) {
      const auto solved = std::upper_bound(mine.begin(), mine.end(), x) - mine.begin();
      out[s].push_back({x, static_cast<double>(solved) / count});
    }
  }
  return out;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  os << "instance,solver,criterion,tau,iterations,inner_iterations,wall_time,eta,status\n";
  const auto old = os.precision(17);
  for (const auto& r : runs)
    os << r.instance << ',' << r.solver << ',' << r.criterion << ',' << r.tau << ','
       << r.iterations << ',' << r.inner_iterations << ',' << r.wall_time << ',' << r.eta << ','
       << r.status << '\n';
  os.precision(old);
}

void write_profile_csv(std::ostream& os, const std::vector<RunRecord>& runs,
                       const std::vector<std::string>& solvers) {
  if (solvers.empty() || runs.size() % solvers.size() != 0)
    throw InvalidInputError("runs do not form an instance-by-solver table");
  const std::size_t instances = runs.size() / solvers.size();
  const double inf = std::numeric_limits<double>::infinity();
  os << "metric,solver,ratio,fraction\n";
  const auto old = os.precision(17);
  const char* metrics[] = {"iterations", "inner_iterations", "time"};
  for (int m = 0; m < 3; ++m) {
    std::vector<std::vector<double>> costs(instances, std::vector<double>(solvers.size(), inf));
    for (std::size_t i = 0; i < instances; ++i)
      for (std::size_t s = 0; s < solvers.size(); ++s) {
        const RunRecord& r = runs[i * solvers.size() + s];
        if (r.status != "converged") continue;
        costs[i][s] = m == 0   ? static_cast<double>(r.iterations)
                      : m == 1 ? static_cast<double>(r.inner_iterations)
                               : r.wall_time;
      }
    const auto prof = performance_profile(costs);
    for (std::size_t s = 0; s < solvers.size(); ++s)
      for (const auto& pt : prof[s])
        os << metrics[m] << ',' << solvers[s] << ',' << pt.ratio << ',' << pt.fraction << '\n';
  }
  os.precision(old);
}

}  // namespace padmm::cli
