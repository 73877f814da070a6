#ifndef FFDD_STATS_HPP
#define FFDD_STATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ffdd/align.hpp"
#include "ffdd/bundle.hpp"
#include "ffdd/descriptor.hpp"

namespace ffdd {

inline constexpr double kDefaultFdrLevel = 0.05;
/// A reference vector shorter than this fraction of the cohort's mean
/// magnitude is flagged as direction-cancelled.
inline constexpr double kCancellationFraction = 0.1;

/// Pointwise ||J_a(m) - J_b(m)|| of two aligned profiles.
std::vector<double> pairwise_dissimilarity(const TractProfile& a,
                                           const TractProfile& b);

/// Trapezoidal integral of the pointwise dissimilarity over the cumulative
/// length of the alignment path (grid units).
double global_dissimilarity(const TractProfile& a, const TractProfile& b,
                            const AlignmentPath& path);

struct ReferenceProfile {
  TractProfile profile;
  std::vector<Vec3> fiber;
  /// Sample indices where the mean vector nearly cancelled.
  std::vector<std::size_t> cancelled;
};

/// Pointwise vector mean of the profiles and pointwise mean of the mean
/// fibers' sample points.
ReferenceProfile reference_profile(std::span<const TractProfile> profiles,
                                   std::span<const MeanFiber> fibers);

/// Aligns `subject` to `reference` and resamples it at every reference
/// sample position.
TractProfile align_to_reference(const TractProfile& subject,
                                const TractProfile& reference,
                                const AlignOptions& options = {});

struct GroupAtlas {
  std::string channel;
  std::size_t cohort_size = 0;
  std::vector<double> arc_positions;
  std::vector<FFDDVector> reference_profile;
  std::vector<Vec3> reference_fiber;
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t size() const { return mean.size(); }
};

/// Single-pass atlas: reference from the raw cohort, one alignment of each
/// member onto it, unbiased pointwise std of aligned magnitudes.
GroupAtlas build_atlas(std::span<const TractProfile> profiles,
                       std::span<const MeanFiber> fibers,
                       const AlignOptions& options = {});

struct AnomalyMap {
  std::vector<double> z;  // NaN where undefined
  std::vector<char> defined;
  std::vector<double> arc_positions;
};

AnomalyMap zscore_profile(const TractProfile& subject, const GroupAtlas& atlas);

enum class TTestKind { kPooled, kWelch };

struct PointwiseStats {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double q_level = kDefaultFdrLevel;
  std::vector<double> arc_positions;
  std::vector<double> t;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<char> significant;
  /// Points where both groups had zero variance.
  std::vector<char> degenerate;

  std::size_t size() const { return p.size(); }
};

/// Two-tailed p of Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

/// Pointwise unpaired t-test on magnitudes. q/significant are left empty;
/// see group_stats.
PointwiseStats pointwise_ttest(std::span<const TractProfile> group_a,
                               std::span<const TractProfile> group_b,
                               TTestKind kind = TTestKind::kPooled);

struct FdrResult {
  std::vector<double> q_values;
  std::vector<char> significant;
};

/// Benjamini-Hochberg step-up at level q.
FdrResult fdr_correct(std::span<const double> p_values, double q = kDefaultFdrLevel);

/// t-test followed by FDR correction.
PointwiseStats group_stats(std::span<const TractProfile> group_a,
                           std::span<const TractProfile> group_b,
                           double q = kDefaultFdrLevel,
                           TTestKind kind = TTestKind::kPooled);

}  // namespace ffdd

#endif  // FFDD_STATS_HPP
