#ifndef FFDD_TESTS_SUPPORT_HPP
#define FFDD_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "ffdd/bundle.hpp"
#include "ffdd/descriptor.hpp"
#include "ffdd/geometry.hpp"

namespace ffdd::test {

/// Straight fiber from a to b with n vertices and constant channel values.
inline FiberStreamline straight_fiber(const Vec3& a, const Vec3& b, std::size_t n,
                                      const std::vector<double>& values = {}) {
  FiberStreamline f;
  for (std::size_t v = 0; v < n; ++v)
    f.vertices.push_back(lerp(a, b, static_cast<double>(v) / static_cast<double>(n - 1)));
  for (double value : values) f.scalars.emplace_back(n, value);
  return f;
}

/// count fibers along +x from x=0 to x=length, on a grid in the yz plane.
inline FiberBundle parallel_bundle(std::size_t count, double length = 100.0,
                                   std::size_t vertices = 101,
                                   std::vector<std::string> channels = {"FA"},
                                   std::vector<double> values = {0.7}) {
  FiberBundle b;
  b.name = "parallel";
  b.channels = std::move(channels);
  for (std::size_t n = 0; n < count; ++n) {
    const double y = static_cast<double>(n % 4) - 1.5;
    const double z = static_cast<double>(n / 4) - 1.0;
    b.fibers.push_back(straight_fiber({0, y, z}, {length, y, z}, vertices, values));
  }
  return b;
}

/// Dense least squares by Gaussian elimination on the normal equations in
/// long double. Independent of the library's QR path.
inline std::vector<double> dense_least_squares(const std::vector<std::vector<double>>& rows,
                                               const std::vector<double>& rhs) {
  const std::size_t n = rows.front().size();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1, 0.0L));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] += static_cast<long double>(rows[r][i]) * rows[r][j];
      a[i][n] += static_cast<long double>(rows[r][i]) * rhs[r];
    }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[pivot][c])) pivot = r;
    std::swap(a[c], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(a[i][n] / a[i][i]);
  return x;
}

/// Cosine design matrix rows at the given parameters.
inline std::vector<std::vector<double>> cosine_rows(const std::vector<double>& s, int degree) {
  std::vector<std::vector<double>> rows;
  for (double t : s) {
    std::vector<double> row;
    for (int k = 0; k <= degree; ++k) row.push_back(std::cos(k * std::numbers::pi * t));
    rows.push_back(row);
  }
  return rows;
}

/// Profile with the given magnitudes along a fixed direction.
inline TractProfile make_profile(const std::vector<double>& magnitudes,
                                 const std::string& channel = "FA",
                                 Vec3 direction = {1, 0, 0}) {
  TractProfile p;
  p.bundle_name = "test";
  p.channel = channel;
  const std::size_t m = magnitudes.size();
  for (std::size_t i = 0; i < m; ++i) {
    p.entries.push_back({magnitudes[i], direction, channel});
    p.arc_positions.push_back(m == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(m - 1));
  }
  p.arc_length = 100.0;
  return p;
}

inline double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

}  // namespace ffdd::test

#endif  // FFDD_TESTS_SUPPORT_HPP
