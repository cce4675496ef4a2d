#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/polynomial.hpp"
#include "bergman/types.hpp"

namespace bergman {

template <typename Real>
struct Root {
  std::complex<Real> value;
  int multiplicity = 1;
  //! |p(z)| / max(1, |z|)^n relative to max |coefficient|.
  Real residual = 0;
};

struct RootOptions {
  double degree_tolerance = 1e-12;   //!< relative threshold for dropping top coefficients
  double certify_tolerance = 1e-8;   //!< scaled residual bound every root must meet
  double cluster_radius = 1e-7;      //!< roots closer than this (times max(1,|z|)) merge
  int max_iterations = 1000;
};

namespace detail {

// p(z)/p'(z); for |z| > 1 evaluated through the reversed polynomial so that
// large roots do not overflow.
template <typename Real>
std::complex<Real> newton_ratio(const ComplexVector<Real>& c, const ComplexVector<Real>& reversed,
                                std::complex<Real> z) {
  using C = std::complex<Real>;
  const auto n = static_cast<Real>(c.size() - 1);
  if (std::abs(z) <= Real(1)) {
    const auto [v, dv] = horner_with_derivative(c, z);
    return v / dv;
  }
  const C y = C(1) / z;
  const auto [q, dq] = horner_with_derivative(reversed, y);
  // p'/p = n/z - y^2 q'(y)/q(y)
  return C(1) / (n * y - y * y * dq / q);
}

// |p(z)| / max(1,|z|)^n.
template <typename Real>
Real scaled_residual(const ComplexVector<Real>& c, const ComplexVector<Real>& reversed, std::complex<Real> z) {
  if (std::abs(z) <= Real(1)) return std::abs(horner(c, z));
  return std::abs(horner(reversed, std::complex<Real>(1) / z));
}

// Initial guesses on circles whose radii come from the upper convex hull of
// (k, log|c_k|), one circle per hull edge.
template <typename Real>
std::vector<std::complex<Real>> initial_guesses(const ComplexVector<Real>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> hull;
  auto logabs = [&](int k) {
    const Real a = std::abs(c(k));
    return a > 0 ? std::log(a) : -std::numeric_limits<Real>::infinity();
  };
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(logabs(k))) continue;
    while (hull.size() >= 2) {
      const int i = hull[hull.size() - 2];
      const int j = hull.back();
      // drop j if it lies on or below the segment i -> k
      if ((logabs(j) - logabs(i)) * (k - i) <= (logabs(k) - logabs(i)) * (j - i))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  std::vector<std::complex<Real>> out;
  out.reserve(n);
  const Real offset = Real(0.7);
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int i = hull[e];
    const int j = hull[e + 1];
    const int count = j - i;
    const Real radius = std::exp((logabs(i) - logabs(j)) / count);
    for (int l = 0; l < count; ++l) {
      const Real angle = Real(2) * std::numbers::pi_v<Real> * l / count + offset + Real(0.3) * e;
      out.push_back(std::polar(radius, angle));
    }
  }
  return out;
}

}  // namespace detail

/**
 * All complex roots of sum_k c(k) z^k with multiplicities, by Aberth-Ehrlich
 * simultaneous iteration. Exact zero low-order coefficients give a root at 0;
 * top coefficients below degree_tolerance * max|c| are dropped. Every
 * returned root is certified by direct evaluation; throws NonConvergence
 * (with the worst residual) otherwise.
 */
template <typename Real>
std::vector<Root<Real>> polynomial_roots(const ComplexVector<Real>& coeffs, const RootOptions& opt = {}) {
  using C = std::complex<Real>;
  const auto degree = effective_degree(coeffs, opt.degree_tolerance);
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "polynomial is identically zero");

  std::vector<Root<Real>> out;
  Eigen::Index low = 0;
  while (low < degree && coeffs(low) == C(0)) ++low;
  if (low > 0) out.push_back({C(0), static_cast<int>(low), Real(0)});
  const auto n = degree - low;
  if (n == 0) return out;

  // Normalize to max |c| = 1 so residuals are relative.
  ComplexVector<Real> c = coeffs.segment(low, n + 1);
  c /= c.cwiseAbs().maxCoeff();
  const ComplexVector<Real> reversed = c.reverse();

  std::vector<C> z = detail::initial_guesses(c);
  std::vector<bool> done(n, false);
  const Real eps = std::numeric_limits<Real>::epsilon();
  int iteration = 0;
  for (; iteration < opt.max_iterations; ++iteration) {
    bool all = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (done[i]) continue;
      const C ratio = detail::newton_ratio(c, reversed, z[i]);
      if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) {
        done[i] = true;  // exact hit: p(z) = 0 or p'(z) = 0 with p(z) tiny
        continue;
      }
      C repulsion(0);
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) repulsion += C(1) / (z[i] - z[j]);
      const C step = ratio / (C(1) - ratio * repulsion);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[i] -= step;
      if (std::abs(step) <= Real(4) * eps * std::max(Real(1), std::abs(z[i])))
        done[i] = true;
      else
        all = false;
    }
    if (all) break;
  }

  // Certification is by residual, not by the stopping rule of the iteration.
  Real worst = 0;
  std::vector<Real> residual(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    residual[i] = detail::scaled_residual(c, reversed, z[i]);
    worst = std::max(worst, residual[i]);
  }
  if (!(worst <= static_cast<Real>(opt.certify_tolerance)))
    throw Error(ErrorKind::NonConvergence, "root residual " + std::to_string(static_cast<double>(worst)) +
                                               " after " + std::to_string(iteration) + " iterations");

  // Cluster merge.
  std::vector<bool> used(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<Eigen::Index> members{i};
    for (std::size_t m = 0; m < members.size(); ++m) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (used[j]) continue;
        const Real scale = std::max(Real(1), std::abs(z[members[m]]));
        if (std::abs(z[j] - z[members[m]]) <= static_cast<Real>(opt.cluster_radius) * scale) {
          used[j] = true;
          members.push_back(j);
        }
      }
    }
    C centre(0);
    Real res = 0;
    for (auto m : members) {
      centre += z[m];
      res = std::max(res, residual[m]);
    }
    centre /= static_cast<Real>(members.size());
    out.push_back({centre, static_cast<int>(members.size()), res});
  }
  return out;
}

}  // namespace bergman
