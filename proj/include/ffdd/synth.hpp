#ifndef FFDD_SYNTH_HPP
#define FFDD_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ffdd/bundle.hpp"

namespace ffdd {

/// Seeded stream used by the generator. The engine is std::mt19937_64
/// (fully specified by the standard); uniforms take the top 53 bits and
/// normals use the Box-Muller cosine branch, so any language can reproduce
/// a bundle from its seed.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

enum class CenterlineKind { kLine, kArc, kHelix };

/// Analytic centerline parameterized by s in [0, 1], proportional to arc
/// length for every kind.
struct Centerline {
  CenterlineKind kind = CenterlineKind::kLine;
  // line
  Vec3 origin;
  Vec3 direction{1.0, 0.0, 0.0};
  double line_length = 100.0;
  // arc in the xy plane, centred at the origin, starting at (radius, 0, 0)
  double arc_radius = 50.0;
  double arc_angle_deg = 90.0;
  // helix (r cos t, r sin t, pitch t), t in [0, 2 pi turns]
  double helix_radius = 1.0;
  double helix_pitch = 0.1;
  double helix_turns = 2.0;

  double length() const;
  Vec3 point(double s) const;
  Vec3 tangent(double s) const;
  /// Parameter of the centerline point closest to p.
  double project(const Vec3& p) const;
};

/// Raised-cosine bump of full width `width` centred at `center`, peak `delta`.
struct Lesion {
  double center = 0.5;
  double width = 0.2;
  double delta = 0.0;

  double value(double s) const;
};

struct ChannelGenerator {
  std::string name;
  double baseline = 0.0;
  std::optional<Lesion> lesion;
  /// Pointwise std of a smooth per-bundle random field shared by all fibers.
  double noise_std = 0.0;
  /// Std of independent per-vertex noise.
  double vertex_noise_std = 0.0;
};

struct SyntheticSpec {
  std::string name = "synthetic";
  Centerline centerline;
  std::size_t fiber_count = 20;
  std::size_t vertices_per_fiber = 100;
  double tube_radius = 2.0;       // mm
  double fan_angle_deg = 0.0;     // half-angle of the fan
  std::optional<Lesion> fan_lesion;  // extra fan half-angle (deg) as a bump
  double noise_std = 0.0;         // vertex jitter, mm per axis
  std::vector<ChannelGenerator> channels;
  std::uint64_t seed = 0;
};

/// Throws kValidation for fiber_count < 1, radius <= 0, width outside (0, 1].
void validate(const SyntheticSpec& spec);

/// Number of sinusoid pairs in the smooth channel noise field.
inline constexpr int kFieldModes = 6;

/// What the generator knows about the bundle it produced.
class GroundTruth {
 public:
  GroundTruth() = default;
  GroundTruth(SyntheticSpec spec, std::vector<double> fan_fractions,
              std::vector<std::vector<double>> field_coefficients);

  const SyntheticSpec& spec() const { return spec_; }
  /// Fan fraction u in [-1, 1] of each fiber; its tangent leans u * fan(s).
  const std::vector<double>& fan_fractions() const { return fan_fractions_; }

  /// baseline + lesion, no noise.
  double clean_channel(std::string_view channel, double s) const;
  /// clean_channel plus this bundle's smooth noise field.
  double realized_channel(std::string_view channel, double s) const;
  /// Fan half-angle in degrees at s.
  double fan_angle_deg(double s) const;
  /// Mean over fibers of cos(u_j * fan(s)): exact fiber-flux density of a
  /// straight-centerline bundle.
  double ffd(double s) const;

  /// JSON record of the clean and realized profiles at `samples` points.
  std::string to_json(std::size_t samples) const;

 private:
  SyntheticSpec spec_;
  std::vector<double> fan_fractions_;
  std::vector<std::vector<double>> field_;  // per channel: a_1, b_1, ..., a_J, b_J
};

struct SyntheticBundle {
  FiberBundle bundle;
  GroundTruth truth;
};

SyntheticBundle generate_bundle(const SyntheticSpec& spec);

/// JSON spec file <-> SyntheticSpec. Throws kParse / kValidation.
SyntheticSpec parse_synthetic_spec(std::string_view json_text);
std::string format_synthetic_spec(const SyntheticSpec& spec);

}  // namespace ffdd

#endif  // FFDD_SYNTH_HPP
