#ifndef GSG_ACCEPTANCE_HPP
#define GSG_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace gsg::acceptance {

// One verification row: pass iff got <= tolerance. `got` is a deviation
// (absolute difference, or a deviation measured in standard errors for
// the stochastic checks; the tolerance column then reads 3.0 for 3 SE).
struct CheckResult {
  std::string name;
  double expected = 0.0;
  double got = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

enum class Level { fast, full };

// fast: the closed-form and ODE criteria (seconds).
// full: adds every Monte Carlo campaign (minutes).
std::vector<CheckResult> run_checks(Level level, unsigned threads = 0);

bool all_passed(const std::vector<CheckResult>& results);

std::string format_table(const std::vector<CheckResult>& results);

}  // namespace gsg::acceptance

#endif
