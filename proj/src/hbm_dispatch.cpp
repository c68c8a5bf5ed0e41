#include <cmath>

#include "period_balance/errors.hpp"
#include "period_balance/hbm.hpp"

namespace period_balance {

bool is_duffing(const Potential& p) {
  if (!p.domain().is_full()) return false;
  if (p.kind() == PotentialKind::poly_family) return p.integer_m() == 2;
  if (p.kind() == PotentialKind::general_poly) {
    const auto& c = p.general_coeffs();
    return c.size() == 1 && c[0].first == 3 && c[0].second == 1;
  }
  return false;
}

std::vector<HbmSolution> solve_hbm(const Potential& p, int N, const std::vector<double>& grid) {
  if (N < 1 || N > 8) fail(ErrorKind::domain, "HBM order must lie in 1..8");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0) || !std::isfinite(grid[i])) fail(ErrorKind::domain, "amplitudes must be positive and finite");
    if (i && !(grid[i] > grid[i - 1])) fail(ErrorKind::domain, "amplitude grid must be strictly increasing");
  }
  const bool closed = p.kind() != PotentialKind::general_poly && p.domain().is_full();
  if (N == 1 && closed) {
    std::vector<HbmSolution> out;
    for (double A : grid) out.push_back(solve_order1(p, A));
    return out;
  }
  if (N == 2 && is_duffing(p)) {
    std::vector<HbmSolution> out;
    for (double A : grid) out.push_back(solve_order2_duffing(A));
    return out;
  }
  if (N == 3 && is_duffing(p)) return DuffingOrder3::instance().branch(grid);
  return solve_numeric(p, N, grid);
}

PeriodSeries hbm_taylor(const Potential& p, int N, int order) {
  if (N == 2 && is_duffing(p)) return duffing_order2_series(order);
  if (N == 3 && is_duffing(p)) return DuffingOrder3::instance().series(order);
  return hbm_series(p, N, order);
}

}  // namespace period_balance
