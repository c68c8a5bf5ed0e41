#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace period_balance {

enum class GridScale { linear, log };

struct GridSpec {
  double min = 0;
  double max = 0;
  int count = 0;
  GridScale scale = GridScale::log;

  std::vector<double> points() const;
};

// "min:max:count:log|linear"
GridSpec parse_grid(const std::string& text);

struct RunConfig {
  std::string potential;
  GridSpec grid;
  double tol = 1e-12;
  std::string format = "json";  // json | csv
  std::string output;           // empty: the output stream
};

// The period-balance command line, minus argv[0]. Returns the exit code:
// 0 success, 2 parse error, 3 domain or convergence error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace period_balance
