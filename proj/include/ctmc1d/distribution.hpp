#pragma once

/**
 * @file distribution.hpp
 * @brief Probability mass functions on 0..N (solved or empirical).
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ctmc1d {

/// Mass function with support 0..N; normalized to 1 within 1e-12 and with
/// negative round-off clamped to zero.
struct Distribution {
  std::vector<double> mass;  // mass[x] for x = 0..N

  Distribution() = default;
  explicit Distribution(std::vector<double> m) : mass(std::move(m)) { normalize_check(); }

  std::size_t support_size() const { return mass.size(); }
  double operator()(std::size_t x) const { return x < mass.size() ? mass[x] : 0.0; }

  double mean() const {
    double s = 0;
    for (std::size_t x = 0; x < mass.size(); ++x) s += static_cast<double>(x) * mass[x];
    return s;
  }
  double variance() const {
    double mu = mean(), s = 0;
    for (std::size_t x = 0; x < mass.size(); ++x) {
      double d = static_cast<double>(x) - mu;
      s += d * d * mass[x];
    }
    return s;
  }

  static Distribution point_mass(std::size_t x, std::size_t n) {
    std::vector<double> m(std::max(n, x) + 1, 0.0);
    m[x] = 1.0;
    return Distribution(std::move(m));
  }

 private:
  void normalize_check() {
    double total = 0;
    for (auto& v : mass) {
      if (v < -1e-12) throw std::domain_error("distribution with negative mass");
      if (v < 0) v = 0;
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      if (total <= 0) throw std::domain_error("distribution with zero total mass");
      for (auto& v : mass) v /= total;
    }
  }
};

}  // namespace ctmc1d
