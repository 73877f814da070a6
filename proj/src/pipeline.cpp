#include "ffdd/pipeline.hpp"

#include <json.hpp>

#include "ffdd/error.hpp"
#include "ffdd/parallel.hpp"

namespace ffdd {
namespace {

std::vector<TractProfile> profiles_of(std::span<const BundleProfile> cohort) {
  std::vector<TractProfile> out;
  out.reserve(cohort.size());
  for (const auto& c : cohort) out.push_back(c.profile);
  return out;
}

std::vector<MeanFiber> fibers_of(std::span<const BundleProfile> cohort) {
  std::vector<MeanFiber> out;
  out.reserve(cohort.size());
  for (const auto& c : cohort) out.push_back(c.mean);
  return out;
}

const char* radius_name(RadiusPolicy p) {
  switch (p) {
    case RadiusPolicy::kAuto: return "auto";
    case RadiusPolicy::kUnbounded: return "unbounded";
    case RadiusPolicy::kFixed: return "fixed";
  }
  return "?";
}

}  // namespace

std::string PipelineConfig::to_json() const {
  nlohmann::json j;
  j["degree"] = degree;
  j["samples"] = samples;
  j["radius_policy"] = radius_name(profile.plane.radius.policy);
  j["radius"] = profile.plane.radius.value;
  j["tol"] = profile.plane.tol;
  j["max_iter"] = profile.plane.max_iter;
  j["empty_policy"] = profile.empty == EmptyPolicy::kFail ? "fail" : "interpolate";
  if (align.lambda) j["lambda"] = *align.lambda;
  else j["lambda"] = nullptr;
  j["lambda_fraction"] = align.lambda_fraction;
  j["epsilon"] = align.epsilon;
  j["fdr_q"] = fdr_q;
  j["ttest"] = ttest == TTestKind::kPooled ? "pooled" : "welch";
  return j.dump();
}

BundleProfile compute_profile(const FiberBundle& bundle, std::string_view channel,
                              const PipelineConfig& config) {
  require_channel(bundle, channel);
  const FiberBundle oriented = reorient_bundle(bundle);
  BundleProfile out;
  out.mean = mean_fiber(oriented, config.degree, config.samples);
  out.profile = tract_profile(oriented, out.mean, channel, config.profile);
  return out;
}

TractProfile atlas_reference(const GroupAtlas& atlas) {
  TractProfile ref;
  ref.bundle_name = "reference";
  ref.channel = atlas.channel;
  ref.entries = atlas.reference_profile;
  ref.arc_positions = atlas.arc_positions;
  return ref;
}

GroupAtlas cohort_atlas(std::span<const BundleProfile> cohort,
                        const PipelineConfig& config) {
  const auto profiles = profiles_of(cohort);
  const auto fibers = fibers_of(cohort);
  return build_atlas(profiles, fibers, config.align);
}

PointwiseStats compare_groups(std::span<const BundleProfile> group_a,
                              std::span<const BundleProfile> group_b,
                              const PipelineConfig& config) {
  std::vector<BundleProfile> pooled(group_a.begin(), group_a.end());
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());
  const auto profiles = profiles_of(pooled);
  const auto fibers = fibers_of(pooled);
  const ReferenceProfile ref = reference_profile(profiles, fibers);

  std::vector<TractProfile> aligned(pooled.size());
  parallel_for(pooled.size(), [&](std::size_t n) {
    try {
      aligned[n] = align_to_reference(profiles[n], ref.profile, config.align);
    } catch (const Error& e) {
      throw Error(e.code(), "subject " + std::to_string(n) + ": " + e.what());
    }
  });
  const std::span<const TractProfile> all(aligned);
  return group_stats(all.first(group_a.size()), all.subspan(group_a.size()),
                     config.fdr_q, config.ttest);
}

AnomalyMap subject_zscore(const TractProfile& subject, const GroupAtlas& atlas,
                          const PipelineConfig& config) {
  const TractProfile aligned = align_to_reference(subject, atlas_reference(atlas), config.align);
  return zscore_profile(aligned, atlas);
}

}  // namespace ffdd
