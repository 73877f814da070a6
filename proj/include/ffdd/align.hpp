#ifndef FFDD_ALIGN_HPP
#define FFDD_ALIGN_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ffdd/descriptor.hpp"

namespace ffdd {

inline constexpr double kDefaultLambdaFraction = 0.1;
inline constexpr double kDefaultEpsilon = 0.05;

/// Row-major rows x cols field. Row index follows profile a (s1), column
/// index follows profile b (s2); spacing is one unit per sample.
struct DissimilarityGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  double lambda = 0.0;
  double length_a = 0.0;
  double length_b = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct DistanceMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  /// Flat indices in the order the front accepted them.
  std::vector<std::size_t> accepted;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  /// Bilinear interpolation at a fractional grid position.
  double interpolate(double i, double j) const;
};

struct GridPoint {
  double i = 0.0;
  double j = 0.0;
};

struct AlignmentPath {
  std::vector<GridPoint> samples;
  double step = kDefaultEpsilon;
  std::size_t rows = 0;
  std::size_t cols = 0;

  /// Sample m scaled to [0, 1] x [0, 1].
  GridPoint normalized(std::size_t m) const;
};

struct AlignOptions {
  /// Absolute regularization; when unset, lambda_fraction times the mean
  /// off-diagonal dissimilarity of the pair.
  std::optional<double> lambda;
  double lambda_fraction = kDefaultLambdaFraction;
  double epsilon = kDefaultEpsilon;
  std::size_t samples = kDefaultSamples;
};

struct Alignment {
  AlignmentPath path;
  std::vector<GridPoint> raw_path;  // origin first
  TractProfile aligned_a;
  TractProfile aligned_b;
  double lambda = 0.0;
  double arrival_time = 0.0;  // T at the far corner
};

/// Mean of ||J_a(i) - J_b(j)|| over i != j, times `fraction`. Falls back to
/// 1 when the profiles are constant and identical.
double default_lambda(const TractProfile& a, const TractProfile& b,
                      double fraction = kDefaultLambdaFraction);

DissimilarityGrid dissimilarity_grid(const TractProfile& a,
                                     const TractProfile& b, double lambda);

/// First-order upwind fast marching for |grad T| = F from T(0,0) = 0.
DistanceMap fmm_solve(std::size_t rows, std::size_t cols,
                      std::span<const double> inverse_speed);
DistanceMap fmm_solve(const DissimilarityGrid& grid);

/// Gradient descent on T from the far corner with unit steps of length
/// epsilon. Returns the path ordered from (0,0) to the far corner.
/// Throws kStalledDescent.
std::vector<GridPoint> backtrack_path(const DistanceMap& tmap, double epsilon);

/// M points equally spaced in path length; endpoints kept, coordinates made
/// non-decreasing.
AlignmentPath resample_path(std::span<const GridPoint> raw, std::size_t samples);

/// Profile evaluated at fractional sample positions by linear interpolation
/// of magnitude and direction (direction renormalized).
TractProfile interpolate_profile(const TractProfile& profile,
                                 std::span<const double> positions);

Alignment align_profiles(const TractProfile& a, const TractProfile& b,
                         const AlignOptions& options = {});

}  // namespace ffdd

#endif  // FFDD_ALIGN_HPP
