#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "ffdd/error.hpp"
#include "ffdd/pipeline.hpp"
#include "ffdd/synth.hpp"
#include "support.hpp"

using namespace ffdd;
using namespace ffdd::test;

namespace {

constexpr double kFieldStd = 0.02;
constexpr double kBaseline = 0.5;

SyntheticSpec cohort_spec(std::uint64_t seed, double lesion_delta = 0.0) {
  SyntheticSpec s;
  s.name = "subject" + std::to_string(seed);
  s.fiber_count = 20;
  s.vertices_per_fiber = 100;
  s.noise_std = 0.02;
  s.seed = seed;
  ChannelGenerator fa{"FA", kBaseline, std::nullopt, kFieldStd, 0.0};
  if (lesion_delta != 0.0) fa.lesion = Lesion{0.5, 0.3, lesion_delta};
  s.channels = {fa};
  return s;
}

std::vector<BundleProfile> cohort(std::uint64_t first_seed, std::size_t count,
                                  const PipelineConfig& config, double lesion_delta = 0.0) {
  std::vector<BundleProfile> out;
  for (std::size_t n = 0; n < count; ++n)
    out.push_back(compute_profile(
        generate_bundle(cohort_spec(first_seed + n, lesion_delta)).bundle, "FA", config));
  return out;
}

// The optimal path crosses a band of rows costing c + lambda, set in a field
// costing lambda, with slope compressing the band by r = q / sqrt(1 - q^2),
// q = lambda / (sqrt 2 (c + lambda)). lambda = 8c keeps r above 0.8.
double lesion_lambda(double contrast) { return 8.0 * contrast; }

}  // namespace

TEST_CASE("config echo names every tunable") {
  PipelineConfig c;
  auto j = nlohmann::json::parse(c.to_json());
  for (const char* key : {"degree", "samples", "radius_policy", "radius", "tol", "max_iter",
                          "empty_policy", "lambda", "lambda_fraction", "epsilon", "fdr_q",
                          "ttest"})
    CHECK(j.contains(key));
  CHECK(j["lambda"].is_null());
  c.align.lambda = 0.25;
  c.ttest = TTestKind::kWelch;
  j = nlohmann::json::parse(c.to_json());
  CHECK(j["lambda"] == 0.25);
  CHECK(j["ttest"] == "welch");
}

TEST_CASE("profile of a flipped bundle matches the original") {
  FiberBundle b = parallel_bundle(8);
  const BundleProfile forward = compute_profile(b, "FA");
  std::reverse(b.fibers[3].vertices.begin(), b.fibers[3].vertices.end());
  const BundleProfile mixed = compute_profile(b, "FA");
  for (std::size_t m = 0; m < forward.profile.size(); ++m)
    CHECK(mixed.profile.entries[m].magnitude ==
          doctest::Approx(forward.profile.entries[m].magnitude).epsilon(1e-9));
  CHECK(forward.profile.entries[50].magnitude == doctest::Approx(0.7).epsilon(1e-9));
  CHECK_THROWS_AS(compute_profile(b, "MD"), Error);
}

TEST_CASE("normal-control cohort recovers the clean profile") {
  const PipelineConfig config;
  const auto nc = cohort(100, 17, config);
  std::vector<TractProfile> profiles;
  std::vector<MeanFiber> fibers;
  for (const auto& s : nc) {
    profiles.push_back(s.profile);
    fibers.push_back(s.mean);
  }
  // fiber jitter leaves the flux just under 1
  const double clean = kBaseline;
  const ReferenceProfile ref = reference_profile(profiles, fibers);
  double worst_ref = 0.0;
  for (const auto& e : ref.profile.entries)
    worst_ref = std::max(worst_ref, std::abs(e.magnitude - clean));
  CHECK(ref.cancelled.empty());

  MESSAGE("reference max deviation = " << worst_ref / kFieldStd << " std");
  CHECK(worst_ref <= kFieldStd);

  // Elastic alignment of flat noisy profiles pairs noise extremes with the
  // reference, so the atlas mean meets the half-std bound only as the
  // alignment approaches the identity.
  auto atlas_deviation = [&](const PipelineConfig& c) {
    const GroupAtlas atlas = cohort_atlas(nc, c);
    CHECK(atlas.cohort_size == 17);
    double worst = 0.0;
    for (double m : atlas.mean) worst = std::max(worst, std::abs(m - clean));
    return worst / kFieldStd;
  };
  PipelineConfig stiff = config;
  stiff.align.lambda = 1e3;
  const double at_default = atlas_deviation(config);
  const double at_stiff = atlas_deviation(stiff);
  MESSAGE("atlas mean max deviation: " << at_default << " std at default lambda, " << at_stiff
                                       << " std at lambda = 1e3");
  CHECK(at_stiff <= 0.5);
}

TEST_CASE("lesioned subject peaks at the lesion centre") {
  constexpr double kDelta = -5.0 * kFieldStd;
  PipelineConfig config;
  config.align.lambda = lesion_lambda(std::abs(kDelta));
  const auto nc = cohort(200, 17, config);
  const GroupAtlas atlas = cohort_atlas(nc, config);
  for (std::uint64_t seed : {300, 301, 302}) {
    const BundleProfile subject =
        compute_profile(generate_bundle(cohort_spec(seed, kDelta)).bundle, "FA", config);
    const AnomalyMap z = subject_zscore(subject.profile, atlas, config);
    std::size_t peak = 0;
    for (std::size_t m = 0; m < z.z.size(); ++m)
      if (z.defined[m] && std::abs(z.z[m]) > std::abs(z.z[peak])) peak = m;
    MESSAGE("seed " << seed << ": peak |z| " << std::abs(z.z[peak]) << " at " << peak);
    CHECK(z.z[peak] < 0.0);
    CHECK(std::abs(static_cast<double>(peak) - 49.5) <= 2.5);
  }
}

TEST_CASE("group comparison flags the lesion") {
  constexpr double kDelta = -5.0 * kFieldStd;
  PipelineConfig config;
  config.align.lambda = lesion_lambda(std::abs(kDelta) * 17.0 / 30.0);
  const auto lesioned = cohort(400, 13, config, kDelta);
  const auto clean = cohort(500, 17, config);
  const PointwiseStats stats = compare_groups(lesioned, clean, config);
  CHECK(stats.n_a == 13);
  CHECK(stats.n_b == 17);
  CHECK(stats.significant[50] == 1);
  CHECK(stats.t[50] < 0.0);
  CHECK(stats.significant[5] == 0);
  CHECK(stats.significant[95] == 0);

  std::vector<BundleProfile> mixed = clean;
  mixed[2].profile.entries.pop_back();
  mixed[2].profile.arc_positions.pop_back();
  try {
    compare_groups(lesioned, mixed, config);
    FAIL("expected a length mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kLengthMismatch);
  }
}
