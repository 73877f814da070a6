#ifndef FFDD_PIPELINE_HPP
#define FFDD_PIPELINE_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffdd/align.hpp"
#include "ffdd/bundle.hpp"
#include "ffdd/descriptor.hpp"
#include "ffdd/stats.hpp"

namespace ffdd {

/// Every tunable of the end-to-end pipeline, defaults included.
struct PipelineConfig {
  int degree = kDefaultDegree;
  int samples = kDefaultSamples;
  ProfileConfig profile;
  AlignOptions align;
  double fdr_q = kDefaultFdrLevel;
  TTestKind ttest = TTestKind::kPooled;

  /// JSON object echoing every field, for output metadata.
  std::string to_json() const;
};

struct BundleProfile {
  MeanFiber mean;
  TractProfile profile;
};

/// reorient -> mean fiber -> tract profile.
BundleProfile compute_profile(const FiberBundle& bundle, std::string_view channel,
                              const PipelineConfig& config = {});

/// The reference profile of a mean-fiber-less atlas as a TractProfile.
TractProfile atlas_reference(const GroupAtlas& atlas);

GroupAtlas cohort_atlas(std::span<const BundleProfile> cohort,
                        const PipelineConfig& config = {});

/// Aligns both groups onto the reference of the pooled cohort, then runs
/// the pointwise test with FDR correction.
PointwiseStats compare_groups(std::span<const BundleProfile> group_a,
                              std::span<const BundleProfile> group_b,
                              const PipelineConfig& config = {});

/// Aligns the subject to the atlas reference and scores it.
AnomalyMap subject_zscore(const TractProfile& subject, const GroupAtlas& atlas,
                          const PipelineConfig& config = {});

}  // namespace ffdd

#endif  // FFDD_PIPELINE_HPP
