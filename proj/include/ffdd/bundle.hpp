#ifndef FFDD_BUNDLE_HPP
#define FFDD_BUNDLE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffdd/geometry.hpp"

namespace ffdd {

inline constexpr int kDefaultDegree = 20;
inline constexpr int kDefaultSamples = 100;

/// One tractography streamline. scalars[c][v] is the value of channel c
/// (in the owning bundle's channel order) at vertex v.
struct FiberStreamline {
  std::vector<Vec3> vertices;
  std::vector<std::vector<double>> scalars;
};

struct FiberBundle {
  std::string name;
  std::vector<std::string> channels;
  std::vector<FiberStreamline> fibers;

  std::optional<std::size_t> channel_index(std::string_view channel) const;
};

/// Throws Error(kValidation) naming the offending fiber/vertex/channel when
/// any structural invariant fails: at least one fiber, at least two
/// vertices per fiber, no zero-length segments, one value per vertex per
/// channel, finite values, FA within [0, 1].
void validate(const FiberBundle& bundle);

/// Per-axis cosine series c(s) = sum_k a_k cos(k pi s), s in [0, 1].
struct CosineSeries {
  int degree = 0;
  std::array<std::vector<double>, 3> coefficients;

  Vec3 evaluate(double s) const;
  Vec3 derivative(double s) const;
};

/// Representative curve of a bundle, sampled at M points equidistant in
/// arc length. The (parameter, arc length) table maps arc-length fractions
/// back to series parameters.
struct MeanFiber {
  CosineSeries series;
  std::vector<Vec3> samples;
  std::vector<Vec3> tangents;
  double arc_length = 0.0;
  std::vector<double> table_parameter;
  std::vector<double> table_arc;

  std::size_t size() const { return samples.size(); }
  /// Series parameter u with arc(u) = fraction * arc_length: table lookup
  /// refined on the exact in-interval arc length.
  double parameter_at(double fraction) const;
};

struct CurvePoint {
  Vec3 point;
  Vec3 tangent;
};

/// Normalized cumulative chord length of a polyline, 0 at the first vertex
/// and 1 at the last. Throws kDegenerateFiber when the total length is 0.
std::vector<double> chord_parameters(const std::vector<Vec3>& vertices);

/// Least-squares fit of the cosine basis {cos(k pi s)}, k = 0..degree, to the
/// fiber's vertices at their chord-length parameters.
/// Throws kDegenerateFiber or kRankDeficient.
CosineSeries fit_cosine_series(const FiberStreamline& fiber, int degree);

/// Averages per-fiber coefficients and resamples the averaged curve at
/// `samples` points equidistant in arc length. Fit failures are rethrown
/// with the fiber index in the message.
MeanFiber mean_fiber(const FiberBundle& bundle, int degree = kDefaultDegree,
                     int samples = kDefaultSamples);

/// Flips fibers whose endpoint vector points against the first fiber's.
FiberBundle reorient_bundle(FiberBundle bundle);

/// Point and unit tangent at arc-length fraction s. Throws kOutOfRange
/// outside [0, 1].
CurvePoint sample_at(const MeanFiber& mean, double s);

}  // namespace ffdd

#endif  // FFDD_BUNDLE_HPP
