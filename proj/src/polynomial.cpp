#include "gaudin_pair/polynomial.hpp"

namespace gaudin_pair {

Complex polish_root(const Polynomial<double>& p, Complex root, int iterations) {
  Polynomial<double> dp;
  for (std::size_t i = 1; i < p.size(); ++i) dp.push_back(static_cast<double>(i) * p[i]);
  for (int it = 0; it < iterations; ++it) {
    const Complex slope = evaluate(dp, root);
    if (slope == Complex(0.0)) break;
    const Complex step = evaluate(p, root) / slope;
    root -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(root))) break;
  }
  return root;
}

}  // namespace gaudin_pair
