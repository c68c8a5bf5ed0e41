#pragma once

#include <utility>
#include <vector>

#include "period_balance/potential.hpp"

namespace period_balance {

enum class LimitPoint { zero, infinity };

// g(x) ~ M x^a at the limit point.
struct AsymptoticTerm {
  double M = 0;
  double a = 0;
  LimitPoint at = LimitPoint::infinity;
};

struct TailFit {
  double C = 0;
  double exponent = 0;
  double residual = 0;  // max relative deviation over the fit window
  int used = 0;         // samples in the accepted window
};

// Euler beta function, relative error <= 1e-13.
double beta(double x, double y);

// Dominant term of T(A) as A -> infinity for the poly and quintic families.
AsymptoticTerm exact_tail(const Potential& p);

// Least-squares line through (log A, log T); refits once on the larger-A
// half when the residual exceeds 0.05.
TailFit tail_fit(const std::vector<std::pair<double, double>>& samples);

}  // namespace period_balance
