#ifndef FFDD_DESCRIPTOR_HPP
#define FFDD_DESCRIPTOR_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffdd/bundle.hpp"
#include "ffdd/geometry.hpp"

namespace ffdd {

/// Pseudo-channel selecting the geometry-only fiber-flux density.
inline constexpr std::string_view kFluxChannel = "FFD";
/// Prefix selecting a plain (unweighted) along-tract scalar profile, e.g.
/// "plain:FA". The scalar is averaged over the same cross-sections.
inline constexpr std::string_view kPlainPrefix = "plain:";

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct CuttingPlane {
  Vec3 point;
  Vec3 normal;
  double radius = kUnbounded;
};

/// Crossings of a bundle with a plane, at most one per fiber.
/// scalars[c][i] is channel c interpolated at crossing i.
struct PlaneIntersections {
  std::vector<Vec3> points;
  std::vector<Vec3> tangents;
  std::vector<std::vector<double>> scalars;
  std::vector<std::size_t> fiber_index;

  std::size_t count() const { return points.size(); }
};

struct FFDDVector {
  double magnitude = 0.0;
  Vec3 direction;
  std::string channel;

  Vec3 vector() const { return direction * magnitude; }
};

enum class RadiusPolicy { kAuto, kUnbounded, kFixed };

struct RadiusSetting {
  RadiusPolicy policy = RadiusPolicy::kAuto;
  /// Radius in mm for kFixed; multiple of the RMS crossing distance for kAuto.
  double value = 3.0;
};

struct PlaneSearchOptions {
  RadiusSetting radius;
  double tol = 1e-6;  // radians
  int max_iter = 50;
};

struct PlaneSearchResult {
  CuttingPlane plane;
  PlaneIntersections intersections;
  int iterations = 0;
  bool converged = false;
};

enum class EmptyPolicy { kFail, kInterpolate };

struct ProfileConfig {
  PlaneSearchOptions plane;
  EmptyPolicy empty = EmptyPolicy::kInterpolate;
};

struct TractProfile {
  std::string bundle_name;
  std::string channel;
  std::vector<FFDDVector> entries;
  std::vector<double> arc_positions;
  double arc_length = 0.0;
  /// Sample indices whose cross-section was empty and got interpolated.
  std::vector<std::size_t> filled;
  /// Sample indices where the plane search hit max_iter.
  std::vector<std::size_t> unconverged;

  std::size_t size() const { return entries.size(); }
};

PlaneIntersections plane_intersections(const FiberBundle& bundle,
                                       const CuttingPlane& plane);

/// Fixed-point search for the flux-maximizing plane normal at p: the next
/// normal is the normalized mean tangent of the current crossing set.
/// Throws kEmptyCrossSection when an iterate has no crossings.
PlaneSearchResult optimize_plane_normal(const FiberBundle& bundle,
                                        const Vec3& p, const Vec3& init,
                                        const PlaneSearchOptions& options = {});

/// Fiber-flux density: mean of tangent . normal over the crossings.
FFDDVector ffd_at(const FiberBundle& bundle, const CuttingPlane& plane);

/// Flux density weighted by a diffusion scalar at each crossing.
FFDDVector ffdd_at(const FiberBundle& bundle, const CuttingPlane& plane,
                   std::string_view channel);

/// Evaluates channel ("FFD", a bundle channel or "plain:<channel>") on a
/// precomputed crossing set.
FFDDVector evaluate_channel(const FiberBundle& bundle,
                            const PlaneIntersections& hits,
                            const Vec3& normal, std::string_view channel);

/// Checks that a channel spec is evaluable on this bundle.
/// Throws kUnknownChannel.
void require_channel(const FiberBundle& bundle, std::string_view channel);

TractProfile tract_profile(const FiberBundle& bundle, const MeanFiber& mean,
                           std::string_view channel,
                           const ProfileConfig& config = {});

}  // namespace ffdd

#endif  // FFDD_DESCRIPTOR_HPP
