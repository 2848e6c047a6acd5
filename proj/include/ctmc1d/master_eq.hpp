#pragma once

/**
 * @file master_eq.hpp
 * @brief Stationary distribution on a truncated window by solving the
 *        balance equations, plus tail-shape diagnostics.
 *
 * Truncation disables any jump that would leave 0..N at its source state
 * (reflecting-style); the induced error is exposed through the boundary-mass
 * diagnostic rather than hidden. One balance row is replaced by the
 * normalization row and the system is solved by sparse LU with partial
 * pivoting; the reported residual is computed on all original balance rows.
 */

#include "distribution.hpp"
#include "model.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <string>
#include <vector>

namespace ctmc1d {

struct StationaryResult {
  Distribution dist;
  double max_residual = 0;   // max |balance row| after normalization
  double boundary_mass = 0;  // pi(N - max|eta| .. N)
  std::vector<std::string> warnings;
};

namespace detail {

/// Number of closed communicating classes (terminal SCCs) of the truncated
/// positive-rate graph, given per-state inbound edge lists.
inline int closed_class_count(
    const std::vector<std::vector<std::pair<long, double>>>& in_edges, long size) {
  std::vector<std::vector<long>> adj(static_cast<std::size_t>(size));
  for (long y = 0; y < size; ++y)
    for (const auto& [src, r] : in_edges[static_cast<std::size_t>(y)])
      adj[static_cast<std::size_t>(src)].push_back(y);

  // Kosaraju: exit order on the forward graph, then components on the
  // reverse graph.
  std::vector<long> order;
  order.reserve(static_cast<std::size_t>(size));
  std::vector<char> vis(static_cast<std::size_t>(size), 0);
  for (long s = 0; s < size; ++s) {
    if (vis[static_cast<std::size_t>(s)]) continue;
    std::vector<std::pair<long, std::size_t>> stack{{s, 0}};
    vis[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      auto& [x, k] = stack.back();
      if (k < adj[static_cast<std::size_t>(x)].size()) {
        long y = adj[static_cast<std::size_t>(x)][k++];
        if (!vis[static_cast<std::size_t>(y)]) {
          vis[static_cast<std::size_t>(y)] = 1;
          stack.push_back({y, 0});
        }
      } else {
        order.push_back(x);
        stack.pop_back();
      }
    }
  }
  std::vector<long> comp(static_cast<std::size_t>(size), -1);
  long n_comp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[static_cast<std::size_t>(*it)] >= 0) continue;
    std::vector<long> stack{*it};
    comp[static_cast<std::size_t>(*it)] = n_comp;
    while (!stack.empty()) {
      long y = stack.back();
      stack.pop_back();
      for (const auto& [src, r] : in_edges[static_cast<std::size_t>(y)])
        if (comp[static_cast<std::size_t>(src)] < 0) {
          comp[static_cast<std::size_t>(src)] = n_comp;
          stack.push_back(src);
        }
    }
    ++n_comp;
  }
  std::vector<char> open(static_cast<std::size_t>(n_comp), 0);
  for (long x = 0; x < size; ++x)
    for (long y : adj[static_cast<std::size_t>(x)])
      if (comp[static_cast<std::size_t>(x)] != comp[static_cast<std::size_t>(y)])
        open[static_cast<std::size_t>(comp[static_cast<std::size_t>(x)])] = 1;
  int closed = 0;
  for (char c : open)
    if (!c) ++closed;
  return closed;
}

}  // namespace detail

inline StationaryResult stationary_truncated(const CtmcModel& m, long n,
                                             ValidationOptions vopts = {}) {
  validate_or_throw(m, vopts);
  if (n <= m.max_abs_eta())
    throw std::invalid_argument("truncation N must exceed max |eta|");
  const long size = n + 1;

  // q[x] entries within the window, jump-truncated at the boundary.
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> out_rate(static_cast<std::size_t>(size), 0.0);
  std::vector<std::vector<std::pair<long, double>>> in_edges(
      static_cast<std::size_t>(size));
  for (long x = 0; x <= n; ++x) {
    for (const auto& j : m.jumps()) {
      long y = x + j.eta;
      if (y < 0 || y > n) continue;  // outward jumps disabled at the source
      double r = to_double(m.effective_rate(x, j));
      if (r <= 0) continue;
      out_rate[static_cast<std::size_t>(x)] += r;
      in_edges[static_cast<std::size_t>(y)].push_back({x, r});
    }
  }

  // A truncation with more than one closed communicating class has no unique
  // stationary law (the balance system is singular in a way a residual check
  // cannot see, since any mixture satisfies it).
  if (detail::closed_class_count(in_edges, size) != 1)
    throw std::runtime_error(
        "disconnected truncation window: multiple closed communicating classes");

  // Row i (< n): balance at state i. Row n: normalization.
  for (long i = 0; i < n; ++i) {
    for (const auto& [src, r] : in_edges[static_cast<std::size_t>(i)])
      trip.emplace_back(static_cast<int>(i), static_cast<int>(src), r);
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i),
                      -out_rate[static_cast<std::size_t>(i)]);
  }
  for (long y = 0; y <= n; ++y)
    trip.emplace_back(static_cast<int>(n), static_cast<int>(y), 1.0);

  Eigen::SparseMatrix<double> A(static_cast<int>(size), static_cast<int>(size));
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs[size - 1] = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error(
        "balance system singular (disconnected truncation window?)");
  Eigen::VectorXd pi = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("balance system solve failed");

  std::vector<double> mass(static_cast<std::size_t>(size));
  for (long i = 0; i < size; ++i) mass[static_cast<std::size_t>(i)] = pi[i];
  StationaryResult res;
  res.dist = Distribution(std::move(mass));

  // Residual of every original balance row under the normalized solution.
  for (long x = 0; x <= n; ++x) {
    double acc = -res.dist.mass[static_cast<std::size_t>(x)] *
                 out_rate[static_cast<std::size_t>(x)];
    for (const auto& [src, r] : in_edges[static_cast<std::size_t>(x)])
      acc += res.dist.mass[static_cast<std::size_t>(src)] * r;
    res.max_residual = std::max(res.max_residual, std::abs(acc));
  }
  if (!std::isfinite(res.max_residual) || res.max_residual > 1e-6)
    throw std::runtime_error("balance residual " + std::to_string(res.max_residual) +
                             " exceeds tolerance (near-singular truncation)");

  for (long x = n - m.max_abs_eta(); x <= n; ++x)
    res.boundary_mass += res.dist.mass[static_cast<std::size_t>(x)];
  if (res.boundary_mass > 1e-3)
    res.warnings.push_back("boundary mass " + std::to_string(res.boundary_mass) +
                           " > 1e-3: increase the truncation N");
  return res;
}

/// Least-squares slopes of log pi against x and against log x, over support
/// points with mass above 1e-14. A diagnostic for heavy vs light tails.
struct TailIndex {
  double slope_vs_x = 0;
  double slope_vs_log_x = 0;
  long points = 0;
};

namespace detail {

inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::domain_error("degenerate abscissae in slope fit");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace detail

inline TailIndex tail_index(const Distribution& dist, double mass_floor = 1e-14) {
  std::vector<double> xs, lxs, ys;
  for (std::size_t x = 0; x < dist.mass.size(); ++x) {
    if (dist.mass[x] <= mass_floor) continue;
    xs.push_back(static_cast<double>(x));
    ys.push_back(std::log(dist.mass[x]));
    if (x >= 1) lxs.push_back(std::log(static_cast<double>(x)));
  }
  if (xs.size() < 20)
    throw std::invalid_argument("tail_index needs at least 20 support points");
  TailIndex t;
  t.points = static_cast<long>(xs.size());
  t.slope_vs_x = detail::ls_slope(xs, ys);
  // align: drop the x=0 point from the log fit if present
  std::vector<double> ys_log(ys.end() - static_cast<long>(lxs.size()), ys.end());
  t.slope_vs_log_x = detail::ls_slope(lxs, ys_log);
  return t;
}

}  // namespace ctmc1d
