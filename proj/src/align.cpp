#include "ffdd/align.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "ffdd/error.hpp"

namespace ffdd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cell {
  std::size_t i0, j0, i1, j1;
  double ti, tj;
};

Cell locate(double i, double j, std::size_t rows, std::size_t cols) {
  i = std::clamp(i, 0.0, static_cast<double>(rows - 1));
  j = std::clamp(j, 0.0, static_cast<double>(cols - 1));
  Cell c;
  c.i0 = std::min(static_cast<std::size_t>(i), rows > 1 ? rows - 2 : 0);
  c.j0 = std::min(static_cast<std::size_t>(j), cols > 1 ? cols - 2 : 0);
  c.i1 = std::min(c.i0 + 1, rows - 1);
  c.j1 = std::min(c.j0 + 1, cols - 1);
  c.ti = i - static_cast<double>(c.i0);
  c.tj = j - static_cast<double>(c.j0);
  return c;
}

template <typename At>
double bilinear(const Cell& c, At&& at) {
  const double a = at(c.i0, c.j0), b = at(c.i1, c.j0);
  const double d = at(c.i0, c.j1), e = at(c.i1, c.j1);
  return (1 - c.ti) * ((1 - c.tj) * a + c.tj * d) + c.ti * ((1 - c.tj) * b + c.tj * e);
}

// Central differences in the interior, one-sided at the borders.
GridPoint node_gradient(const DistanceMap& t, std::size_t i, std::size_t j) {
  GridPoint g;
  if (t.rows > 1) {
    const std::size_t lo = i > 0 ? i - 1 : i;
    const std::size_t hi = i + 1 < t.rows ? i + 1 : i;
    g.i = (t.at(hi, j) - t.at(lo, j)) / static_cast<double>(hi - lo);
  }
  if (t.cols > 1) {
    const std::size_t lo = j > 0 ? j - 1 : j;
    const std::size_t hi = j + 1 < t.cols ? j + 1 : j;
    g.j = (t.at(i, hi) - t.at(i, lo)) / static_cast<double>(hi - lo);
  }
  return g;
}

// Gradient of the bilinear interpolant of T inside cell c.
GridPoint surface_gradient(const DistanceMap& t, const Cell& c) {
  const double a = t.at(c.i0, c.j0), b = t.at(c.i1, c.j0);
  const double d = t.at(c.i0, c.j1), e = t.at(c.i1, c.j1);
  GridPoint g;
  if (c.i1 != c.i0) g.i = (1 - c.tj) * (b - a) + c.tj * (e - d);
  if (c.j1 != c.j0) g.j = (1 - c.ti) * (d - a) + c.ti * (e - b);
  return g;
}

double distance(const GridPoint& a, const GridPoint& b) {
  return std::hypot(a.i - b.i, a.j - b.j);
}

}  // namespace

double DistanceMap::interpolate(double i, double j) const {
  const Cell c = locate(i, j, rows, cols);
  return bilinear(c, [&](std::size_t r, std::size_t s) { return at(r, s); });
}

GridPoint AlignmentPath::normalized(std::size_t m) const {
  const GridPoint& p = samples[m];
  return {rows > 1 ? p.i / static_cast<double>(rows - 1) : 0.0,
          cols > 1 ? p.j / static_cast<double>(cols - 1) : 0.0};
}

double default_lambda(const TractProfile& a, const TractProfile& b,
                      double fraction) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec3 va = a.entries[i].vector();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i == j) continue;
      sum += norm(va - b.entries[j].vector());
      ++count;
    }
  }
  const double mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
  return mean > 0.0 ? fraction * mean : 1.0;
}

DissimilarityGrid dissimilarity_grid(const TractProfile& a,
                                     const TractProfile& b, double lambda) {
  if (a.size() == 0 || b.size() == 0)
    throw Error(ErrorCode::kInvalidArgument, "cannot align an empty profile");
  if (a.channel != b.channel)
    throw Error(ErrorCode::kChannelMismatch,
                "profiles carry different channels: '" + a.channel + "' vs '" +
                    b.channel + "'");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::kInvalidArgument, "lambda must be finite and > 0");
  DissimilarityGrid grid;
  grid.rows = a.size();
  grid.cols = b.size();
  grid.lambda = lambda;
  grid.length_a = a.arc_length;
  grid.length_b = b.arc_length;
  grid.values.resize(grid.rows * grid.cols);
  for (std::size_t i = 0; i < grid.rows; ++i) {
    const Vec3 va = a.entries[i].vector();
    for (std::size_t j = 0; j < grid.cols; ++j)
      grid.values[i * grid.cols + j] = norm(va - b.entries[j].vector()) + lambda;
  }
  return grid;
}

DistanceMap fmm_solve(std::size_t rows, std::size_t cols,
                      std::span<const double> inverse_speed) {
  if (rows == 0 || cols == 0 || inverse_speed.size() != rows * cols)
    throw Error(ErrorCode::kInvalidArgument, "speed field does not match grid size");
  DistanceMap tmap;
  tmap.rows = rows;
  tmap.cols = cols;
  tmap.values.assign(rows * cols, kInf);
  tmap.accepted.reserve(rows * cols);
  std::vector<char> known(rows * cols, 0);

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> front;
  tmap.values[0] = 0.0;
  front.emplace(0.0, 0);

  auto known_value = [&](std::size_t i, std::size_t j) {
    const std::size_t k = i * cols + j;
    return known[k] ? tmap.values[k] : kInf;
  };

  while (!front.empty()) {
    const auto [t, k] = front.top();
    front.pop();
    if (known[k] || t > tmap.values[k]) continue;
    known[k] = 1;
    tmap.accepted.push_back(k);
    const std::size_t ci = k / cols, cj = k % cols;

    const std::pair<long, long> steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& [di, dj] : steps) {
      const long ni = static_cast<long>(ci) + di;
      const long nj = static_cast<long>(cj) + dj;
      if (ni < 0 || nj < 0 || ni >= static_cast<long>(rows) || nj >= static_cast<long>(cols))
        continue;
      const std::size_t i = static_cast<std::size_t>(ni), j = static_cast<std::size_t>(nj);
      const std::size_t nk = i * cols + j;
      if (known[nk]) continue;

      double a = kInf, b = kInf;
      if (i > 0) a = std::min(a, known_value(i - 1, j));
      if (i + 1 < rows) a = std::min(a, known_value(i + 1, j));
      if (j > 0) b = std::min(b, known_value(i, j - 1));
      if (j + 1 < cols) b = std::min(b, known_value(i, j + 1));
      const double f = inverse_speed[nk];
      double v;
      if (std::isinf(a) || std::isinf(b)) {
        v = std::min(a, b) + f;
      } else if (std::abs(a - b) < f) {
        v = 0.5 * (a + b + std::sqrt(2.0 * f * f - (a - b) * (a - b)));
      } else {
        v = std::min(a, b) + f;
      }
      if (v < tmap.values[nk]) {
        tmap.values[nk] = v;
        front.emplace(v, nk);
      }
    }
  }
  return tmap;
}

DistanceMap fmm_solve(const DissimilarityGrid& grid) {
  return fmm_solve(grid.rows, grid.cols, grid.values);
}

std::vector<GridPoint> backtrack_path(const DistanceMap& tmap, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  const double max_i = static_cast<double>(tmap.rows - 1);
  const double max_j = static_cast<double>(tmap.cols - 1);

  std::vector<GridPoint> path{{max_i, max_j}};
  const GridPoint origin{0.0, 0.0};
  const double stop = std::sqrt(2.0) * epsilon;
  const std::size_t max_steps =
      static_cast<std::size_t>(20.0 * (max_i + max_j + 2.0) / epsilon);

  // Unit step of length epsilon against g. Components pushing out of the
  // rectangle are dropped first, so steps along a border keep length
  // epsilon.
  const auto step = [&](const GridPoint& from, double gi, double gj) {
    if ((from.i <= 0.0 && gi > 0.0) || (from.i >= max_i && gi < 0.0)) gi = 0.0;
    if ((from.j <= 0.0 && gj > 0.0) || (from.j >= max_j && gj < 0.0)) gj = 0.0;
    const double g = std::hypot(gi, gj);
    if (!(g > 0.0)) return from;
    return GridPoint{std::clamp(from.i - epsilon * gi / g, 0.0, max_i),
                     std::clamp(from.j - epsilon * gj / g, 0.0, max_j)};
  };

  GridPoint here = path.back();
  double t_here = tmap.interpolate(here.i, here.j);
  int stalled = 0;
  while (distance(here, origin) > stop) {
    if (path.size() > max_steps)
      throw Error(ErrorCode::kStalledDescent,
                  "descent did not reach the origin within " +
                      std::to_string(max_steps) + " steps");
    const Cell c = locate(here.i, here.j, tmap.rows, tmap.cols);
    const double gi = bilinear(c, [&](std::size_t r, std::size_t s) {
      return node_gradient(tmap, r, s).i;
    });
    const double gj = bilinear(c, [&](std::size_t r, std::size_t s) {
      return node_gradient(tmap, r, s).j;
    });
    GridPoint next = step(here, gi, gj);
    double t_next = tmap.interpolate(next.i, next.j);
    if (!(t_next < t_here)) {
      // Central differences straddling a crease of T can point uphill;
      // retry along the gradient of the interpolated surface itself.
      const GridPoint g = surface_gradient(tmap, c);
      const GridPoint retry = step(here, g.i, g.j);
      const double t_retry = tmap.interpolate(retry.i, retry.j);
      if (t_retry < t_here) {
        next = retry;
        t_next = t_retry;
      }
    }
    if (!(t_next < t_here)) {
      if (++stalled >= 10)
        throw Error(ErrorCode::kStalledDescent,
                    "T failed to decrease for 10 consecutive steps near (" +
                        std::to_string(here.i) + ", " + std::to_string(here.j) + ")");
    } else {
      stalled = 0;
    }
    here = next;
    t_here = t_next;
    path.push_back(here);
  }
  path.push_back(origin);
  std::reverse(path.begin(), path.end());
  return path;
}

AlignmentPath resample_path(std::span<const GridPoint> raw, std::size_t samples) {
  if (raw.empty() || samples < 2)
    throw Error(ErrorCode::kInvalidArgument, "resampling needs a path and >= 2 samples");
  std::vector<double> cumulative(raw.size(), 0.0);
  for (std::size_t k = 1; k < raw.size(); ++k)
    cumulative[k] = cumulative[k - 1] + distance(raw[k], raw[k - 1]);
  const double total = cumulative.back();

  AlignmentPath out;
  out.samples.resize(samples);
  out.rows = static_cast<std::size_t>(std::llround(raw.back().i)) + 1;
  out.cols = static_cast<std::size_t>(std::llround(raw.back().j)) + 1;
  out.samples.front() = raw.front();
  out.samples.back() = raw.back();
  std::size_t seg = 1;
  for (std::size_t m = 1; m + 1 < samples; ++m) {
    const double target = total * static_cast<double>(m) / static_cast<double>(samples - 1);
    while (seg + 1 < raw.size() && cumulative[seg] < target) ++seg;
    const double span = cumulative[seg] - cumulative[seg - 1];
    const double t = span > 0.0 ? (target - cumulative[seg - 1]) / span : 0.0;
    out.samples[m] = {raw[seg - 1].i + t * (raw[seg].i - raw[seg - 1].i),
                      raw[seg - 1].j + t * (raw[seg].j - raw[seg - 1].j)};
  }
  for (std::size_t m = 1; m < samples; ++m) {
    out.samples[m].i = std::max(out.samples[m].i, out.samples[m - 1].i);
    out.samples[m].j = std::max(out.samples[m].j, out.samples[m - 1].j);
  }
  return out;
}

TractProfile interpolate_profile(const TractProfile& profile,
                                 std::span<const double> positions) {
  if (profile.size() == 0)
    throw Error(ErrorCode::kInvalidArgument, "cannot interpolate an empty profile");
  TractProfile out;
  out.bundle_name = profile.bundle_name;
  out.channel = profile.channel;
  out.arc_length = profile.arc_length;
  out.entries.resize(positions.size());
  out.arc_positions.resize(positions.size());
  const double last = static_cast<double>(profile.size() - 1);
  for (std::size_t m = 0; m < positions.size(); ++m) {
    const double x = std::clamp(positions[m], 0.0, last);
    const std::size_t lo = std::min(static_cast<std::size_t>(x),
                                    profile.size() > 1 ? profile.size() - 2 : 0);
    const std::size_t hi = std::min(lo + 1, profile.size() - 1);
    const double t = x - static_cast<double>(lo);
    const auto& a = profile.entries[lo];
    const auto& b = profile.entries[hi];
    FFDDVector& e = out.entries[m];
    e.channel = profile.channel;
    e.magnitude = a.magnitude + t * (b.magnitude - a.magnitude);
    e.direction = normalized(lerp(a.direction, b.direction, t));
    if (norm(e.direction) == 0.0) e.direction = t < 0.5 ? a.direction : b.direction;
    out.arc_positions[m] = positions.size() > 1
                               ? static_cast<double>(m) / static_cast<double>(positions.size() - 1)
                               : 0.0;
  }
  return out;
}

Alignment align_profiles(const TractProfile& a, const TractProfile& b,
                         const AlignOptions& options) {
  Alignment out;
  out.lambda = options.lambda ? *options.lambda
                              : default_lambda(a, b, options.lambda_fraction);
  const DissimilarityGrid grid = dissimilarity_grid(a, b, out.lambda);
  const DistanceMap tmap = fmm_solve(grid);
  out.arrival_time = tmap.values.back();
  out.raw_path = backtrack_path(tmap, options.epsilon);
  out.path = resample_path(out.raw_path, options.samples);
  out.path.step = options.epsilon;
  out.path.rows = grid.rows;
  out.path.cols = grid.cols;

  std::vector<double> pos_a(out.path.samples.size()), pos_b(out.path.samples.size());
  for (std::size_t m = 0; m < pos_a.size(); ++m) {
    pos_a[m] = out.path.samples[m].i;
    pos_b[m] = out.path.samples[m].j;
  }
  out.aligned_a = interpolate_profile(a, pos_a);
  out.aligned_b = interpolate_profile(b, pos_b);
  return out;
}

}  // namespace ffdd
