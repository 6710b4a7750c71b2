#pragma once

#include <iosfwd>
#include <string>

#include "qsl/master.hpp"
#include "qsl/scenario_io.hpp"

namespace qsl {

// process exit codes; every distinct failure class gets its own code so shell
// scripts can branch on what went wrong
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;      // unexpected internal error
inline constexpr int config = 2;       // bad CLI arguments or config file
inline constexpr int integration = 3;  // numerical blow-up in a trajectory
inline constexpr int convergence = 4;  // step-halving check failed
inline constexpr int comparison = 5;   // cross-validation outside tolerance
inline constexpr int io = 6;           // filesystem error
}  // namespace exit_code

// comparison thresholds, echoed verbatim into every compare report
inline constexpr double kSeMultiplier = 3.0;         // Monte Carlo envelope multiplier
inline constexpr double kMasterVsAnalyticTol = 1e-6; // deterministic grid tolerance

struct CommonIo {
  std::string out;        // primary output (series CSV, or compare report)
  std::string hist_out;   // terminal histogram CSV
  std::string paths_out;  // per-realization survival CSV
  int threads = 0;        // 0 = hardware concurrency
  int bins = 20;
};

int cmd_preset_list(std::ostream& os);
int cmd_sim(const LoadedScenario& ls, const CommonIo& io);
int cmd_master(const LoadedScenario& ls, DissipatorMode mode, const CommonIo& io);
int cmd_analytic(const LoadedScenario& ls, const CommonIo& io);
int cmd_compare(const LoadedScenario& ls, const std::string& pair, const CommonIo& io);

}  // namespace qsl
