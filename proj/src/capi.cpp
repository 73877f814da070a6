#include "ffdd/ffdd.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "ffdd/error.hpp"
#include "ffdd/io.hpp"
#include "ffdd/pipeline.hpp"
#include "ffdd/synth.hpp"

struct ffdd_bundle {
  ffdd::FiberBundle value;
};
struct ffdd_profile {
  ffdd::BundleProfile value;
};
struct ffdd_comparison {
  ffdd::Comparison value;
};
struct ffdd_atlas {
  ffdd::GroupAtlas value;
};
struct ffdd_stats {
  ffdd::PointwiseStats value;
};
struct ffdd_anomaly {
  ffdd::AnomalyMap value;
};

namespace {

thread_local std::string last_error;

ffdd_status status_of(ffdd::ErrorCode code) {
  using ffdd::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return FFDD_ERR_INVALID_ARGUMENT;
    case ErrorCode::kParse: return FFDD_ERR_PARSE;
    case ErrorCode::kVersionMismatch: return FFDD_ERR_VERSION_MISMATCH;
    case ErrorCode::kCountMismatch: return FFDD_ERR_COUNT_MISMATCH;
    case ErrorCode::kValidation: return FFDD_ERR_VALIDATION;
    case ErrorCode::kIo: return FFDD_ERR_IO;
    case ErrorCode::kUnknownChannel: return FFDD_ERR_UNKNOWN_CHANNEL;
    case ErrorCode::kChannelMismatch: return FFDD_ERR_CHANNEL_MISMATCH;
    case ErrorCode::kLengthMismatch: return FFDD_ERR_LENGTH_MISMATCH;
    case ErrorCode::kOutOfRange: return FFDD_ERR_OUT_OF_RANGE;
    case ErrorCode::kDegenerateFiber: return FFDD_ERR_DEGENERATE_FIBER;
    case ErrorCode::kRankDeficient: return FFDD_ERR_RANK_DEFICIENT;
    case ErrorCode::kEmptyCrossSection: return FFDD_ERR_EMPTY_CROSS_SECTION;
    case ErrorCode::kStalledDescent: return FFDD_ERR_STALLED_DESCENT;
  }
  return FFDD_ERR_INTERNAL;
}

template <class F>
ffdd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FFDD_OK;
  } catch (const ffdd::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FFDD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FFDD_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw ffdd::Error(ffdd::ErrorCode::kInvalidArgument, what);
}

ffdd::PipelineConfig to_pipeline(const ffdd_config* c) {
  ffdd::PipelineConfig out;
  if (c == nullptr) return out;
  require(c->degree >= 0, "degree must be non-negative");
  require(c->samples >= 2, "samples must be at least 2");
  require(c->tol > 0.0, "tol must be positive");
  require(c->max_iter >= 1, "max_iter must be at least 1");
  require(c->epsilon > 0.0, "epsilon must be positive");
  require(c->fdr_q > 0.0 && c->fdr_q <= 1.0, "fdr_q must lie in (0, 1]");
  out.degree = c->degree;
  out.samples = c->samples;
  switch (c->radius_policy) {
    case FFDD_RADIUS_AUTO: out.profile.plane.radius.policy = ffdd::RadiusPolicy::kAuto; break;
    case FFDD_RADIUS_UNBOUNDED:
      out.profile.plane.radius.policy = ffdd::RadiusPolicy::kUnbounded;
      break;
    case FFDD_RADIUS_FIXED:
      require(c->radius > 0.0, "radius must be positive");
      out.profile.plane.radius.policy = ffdd::RadiusPolicy::kFixed;
      break;
    default: require(false, "unknown radius policy");
  }
  out.profile.plane.radius.value = c->radius;
  out.profile.plane.tol = c->tol;
  out.profile.plane.max_iter = c->max_iter;
  out.profile.empty =
      c->empty_policy == FFDD_EMPTY_FAIL ? ffdd::EmptyPolicy::kFail : ffdd::EmptyPolicy::kInterpolate;
  if (c->lambda > 0.0) out.align.lambda = c->lambda;
  out.align.lambda_fraction = c->lambda_fraction;
  out.align.epsilon = c->epsilon;
  out.align.samples = static_cast<std::size_t>(c->samples);
  out.fdr_q = c->fdr_q;
  out.ttest = c->ttest == FFDD_TTEST_WELCH ? ffdd::TTestKind::kWelch : ffdd::TTestKind::kPooled;
  return out;
}

ffdd::Format to_format(ffdd_format f) {
  require(f == FFDD_FORMAT_CSV || f == FFDD_FORMAT_JSON, "unknown format");
  return f == FFDD_FORMAT_JSON ? ffdd::Format::kJson : ffdd::Format::kCsv;
}

std::string_view metadata_of(const char* text) {
  return text == nullptr ? std::string_view{} : std::string_view{text};
}

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void require_length(std::size_t have, std::size_t want) {
  if (have != want)
    throw ffdd::Error(ffdd::ErrorCode::kLengthMismatch,
                      "buffer holds " + std::to_string(have) + " values, need " +
                          std::to_string(want));
}

template <class T, class Handle>
std::vector<T> unwrap(const Handle* const* items, std::size_t count) {
  require(items != nullptr || count == 0, "null handle array");
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    require(items[n] != nullptr, "null handle in array");
    out.push_back(items[n]->value);
  }
  return out;
}

}  // namespace

extern "C" {

const char* ffdd_version(void) { return "0.1.0"; }

const char* ffdd_status_name(ffdd_status status) {
  switch (status) {
    case FFDD_OK: return "ok";
    case FFDD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FFDD_ERR_PARSE: return "parse error";
    case FFDD_ERR_VERSION_MISMATCH: return "version mismatch";
    case FFDD_ERR_COUNT_MISMATCH: return "count mismatch";
    case FFDD_ERR_VALIDATION: return "validation error";
    case FFDD_ERR_IO: return "i/o error";
    case FFDD_ERR_UNKNOWN_CHANNEL: return "unknown channel";
    case FFDD_ERR_CHANNEL_MISMATCH: return "channel mismatch";
    case FFDD_ERR_LENGTH_MISMATCH: return "length mismatch";
    case FFDD_ERR_OUT_OF_RANGE: return "out of range";
    case FFDD_ERR_DEGENERATE_FIBER: return "degenerate fiber";
    case FFDD_ERR_RANK_DEFICIENT: return "rank deficient fit";
    case FFDD_ERR_EMPTY_CROSS_SECTION: return "empty cross-section";
    case FFDD_ERR_STALLED_DESCENT: return "stalled descent";
    case FFDD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int ffdd_status_is_numerical(ffdd_status status) {
  switch (status) {
    case FFDD_ERR_DEGENERATE_FIBER:
    case FFDD_ERR_RANK_DEFICIENT:
    case FFDD_ERR_EMPTY_CROSS_SECTION:
    case FFDD_ERR_STALLED_DESCENT:
    case FFDD_ERR_INTERNAL:
      return 1;
    default:
      return 0;
  }
}

const char* ffdd_last_error(void) { return last_error.c_str(); }

void ffdd_string_free(char* text) { std::free(text); }

void ffdd_config_default(ffdd_config* config) {
  if (config == nullptr) return;
  const ffdd::PipelineConfig d;
  config->degree = d.degree;
  config->samples = d.samples;
  config->radius_policy = FFDD_RADIUS_AUTO;
  config->radius = d.profile.plane.radius.value;
  config->tol = d.profile.plane.tol;
  config->max_iter = d.profile.plane.max_iter;
  config->empty_policy = FFDD_EMPTY_INTERPOLATE;
  config->lambda = 0.0;
  config->lambda_fraction = d.align.lambda_fraction;
  config->epsilon = d.align.epsilon;
  config->fdr_q = d.fdr_q;
  config->ttest = FFDD_TTEST_POOLED;
}

ffdd_status ffdd_config_to_json(const ffdd_config* config, char** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = duplicate(to_pipeline(config).to_json());
  });
}

ffdd_status ffdd_bundle_load(const char* path, ffdd_bundle** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new ffdd_bundle{ffdd::load_bundle(path)};
  });
}

ffdd_status ffdd_bundle_save(const ffdd_bundle* bundle, const char* path) {
  return guarded([&] {
    require(bundle != nullptr && path != nullptr, "null argument");
    ffdd::save_bundle(bundle->value, path);
  });
}

ffdd_status ffdd_bundle_generate(const char* spec_json, int64_t seed, size_t oracle_samples,
                                 ffdd_bundle** out, char** oracle_json) {
  if (out != nullptr) *out = nullptr;
  if (oracle_json != nullptr) *oracle_json = nullptr;
  return guarded([&] {
    require(spec_json != nullptr && out != nullptr, "null argument");
    ffdd::SyntheticSpec spec = ffdd::parse_synthetic_spec(spec_json);
    if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
    ffdd::SyntheticBundle generated = ffdd::generate_bundle(spec);
    char* oracle = nullptr;
    if (oracle_json != nullptr) {
      require(oracle_samples >= 2, "oracle needs at least 2 samples");
      oracle = duplicate(generated.truth.to_json(oracle_samples));
    }
    *out = new ffdd_bundle{std::move(generated.bundle)};
    if (oracle_json != nullptr) *oracle_json = oracle;
  });
}

const char* ffdd_bundle_name(const ffdd_bundle* bundle) {
  return bundle == nullptr ? "" : bundle->value.name.c_str();
}

size_t ffdd_bundle_fiber_count(const ffdd_bundle* bundle) {
  return bundle == nullptr ? 0 : bundle->value.fibers.size();
}

void ffdd_bundle_free(ffdd_bundle* bundle) { delete bundle; }

ffdd_status ffdd_profile_compute(const ffdd_bundle* bundle, const char* channel,
                                 const ffdd_config* config, ffdd_profile** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(bundle != nullptr && channel != nullptr && out != nullptr, "null argument");
    *out = new ffdd_profile{ffdd::compute_profile(bundle->value, channel, to_pipeline(config))};
  });
}

size_t ffdd_profile_size(const ffdd_profile* profile) {
  return profile == nullptr ? 0 : profile->value.profile.size();
}

size_t ffdd_profile_filled_count(const ffdd_profile* profile) {
  return profile == nullptr ? 0 : profile->value.profile.filled.size();
}

size_t ffdd_profile_unconverged_count(const ffdd_profile* profile) {
  return profile == nullptr ? 0 : profile->value.profile.unconverged.size();
}

double ffdd_profile_arc_length(const ffdd_profile* profile) {
  return profile == nullptr ? 0.0 : profile->value.profile.arc_length;
}

ffdd_status ffdd_profile_arrays(const ffdd_profile* profile, double* arc_fraction,
                                double* magnitude, double* direction_xyz, size_t n) {
  return guarded([&] {
    require(profile != nullptr, "null profile");
    const auto& p = profile->value.profile;
    require_length(n, p.size());
    for (std::size_t m = 0; m < n; ++m) {
      if (arc_fraction) arc_fraction[m] = p.arc_positions[m];
      if (magnitude) magnitude[m] = p.entries[m].magnitude;
      if (direction_xyz) {
        direction_xyz[3 * m] = p.entries[m].direction.x;
        direction_xyz[3 * m + 1] = p.entries[m].direction.y;
        direction_xyz[3 * m + 2] = p.entries[m].direction.z;
      }
    }
  });
}

ffdd_status ffdd_profile_export(const ffdd_profile* profile, const char* path,
                                ffdd_format format, const char* metadata_json) {
  return guarded([&] {
    require(profile != nullptr && path != nullptr, "null argument");
    ffdd::export_profile(profile->value.profile, path, to_format(format),
                         metadata_of(metadata_json));
  });
}

void ffdd_profile_free(ffdd_profile* profile) { delete profile; }

ffdd_status ffdd_compare(const ffdd_profile* a, const ffdd_profile* b,
                         const ffdd_config* config, ffdd_comparison** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    const ffdd::PipelineConfig cfg = to_pipeline(config);
    ffdd::Comparison c;
    c.alignment = ffdd::align_profiles(a->value.profile, b->value.profile, cfg.align);
    c.pointwise = ffdd::pairwise_dissimilarity(c.alignment.aligned_a, c.alignment.aligned_b);
    c.global = ffdd::global_dissimilarity(c.alignment.aligned_a, c.alignment.aligned_b,
                                          c.alignment.path);
    *out = new ffdd_comparison{std::move(c)};
  });
}

size_t ffdd_comparison_size(const ffdd_comparison* comparison) {
  return comparison == nullptr ? 0 : comparison->value.pointwise.size();
}

double ffdd_comparison_global(const ffdd_comparison* comparison) {
  return comparison == nullptr ? 0.0 : comparison->value.global;
}

double ffdd_comparison_lambda(const ffdd_comparison* comparison) {
  return comparison == nullptr ? 0.0 : comparison->value.alignment.lambda;
}

ffdd_status ffdd_comparison_arrays(const ffdd_comparison* comparison, double* s1, double* s2,
                                   double* magnitude_a, double* magnitude_b, double* d,
                                   size_t n) {
  return guarded([&] {
    require(comparison != nullptr, "null comparison");
    const auto& c = comparison->value;
    require_length(n, c.pointwise.size());
    for (std::size_t m = 0; m < n; ++m) {
      const ffdd::GridPoint g = c.alignment.path.normalized(m);
      if (s1) s1[m] = g.i;
      if (s2) s2[m] = g.j;
      if (magnitude_a) magnitude_a[m] = c.alignment.aligned_a.entries[m].magnitude;
      if (magnitude_b) magnitude_b[m] = c.alignment.aligned_b.entries[m].magnitude;
      if (d) d[m] = c.pointwise[m];
    }
  });
}

ffdd_status ffdd_comparison_export(const ffdd_comparison* comparison, const char* path,
                                   ffdd_format format, const char* metadata_json) {
  return guarded([&] {
    require(comparison != nullptr && path != nullptr, "null argument");
    ffdd::write_text(path, ffdd::format_comparison(comparison->value, to_format(format),
                                                   metadata_of(metadata_json)));
  });
}

void ffdd_comparison_free(ffdd_comparison* comparison) { delete comparison; }

ffdd_status ffdd_atlas_build(const ffdd_profile* const* cohort, size_t count,
                             const ffdd_config* config, ffdd_atlas** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto members = unwrap<ffdd::BundleProfile>(cohort, count);
    *out = new ffdd_atlas{ffdd::cohort_atlas(members, to_pipeline(config))};
  });
}

ffdd_status ffdd_atlas_import(const char* path, ffdd_format format, ffdd_atlas** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new ffdd_atlas{ffdd::import_atlas(path, to_format(format))};
  });
}

size_t ffdd_atlas_size(const ffdd_atlas* atlas) {
  return atlas == nullptr ? 0 : atlas->value.size();
}

size_t ffdd_atlas_cohort_size(const ffdd_atlas* atlas) {
  return atlas == nullptr ? 0 : atlas->value.cohort_size;
}

const char* ffdd_atlas_channel(const ffdd_atlas* atlas) {
  return atlas == nullptr ? "" : atlas->value.channel.c_str();
}

ffdd_status ffdd_atlas_arrays(const ffdd_atlas* atlas, double* arc_fraction, double* mean,
                              double* std_dev, size_t n) {
  return guarded([&] {
    require(atlas != nullptr, "null atlas");
    const auto& a = atlas->value;
    require_length(n, a.size());
    for (std::size_t m = 0; m < n; ++m) {
      if (arc_fraction) arc_fraction[m] = a.arc_positions[m];
      if (mean) mean[m] = a.mean[m];
      if (std_dev) std_dev[m] = a.std[m];
    }
  });
}

ffdd_status ffdd_atlas_export(const ffdd_atlas* atlas, const char* path, ffdd_format format,
                              const char* metadata_json) {
  return guarded([&] {
    require(atlas != nullptr && path != nullptr, "null argument");
    ffdd::export_atlas(atlas->value, path, to_format(format), metadata_of(metadata_json));
  });
}

void ffdd_atlas_free(ffdd_atlas* atlas) { delete atlas; }

ffdd_status ffdd_groupstats(const ffdd_profile* const* group_a, size_t count_a,
                            const ffdd_profile* const* group_b, size_t count_b,
                            const ffdd_config* config, ffdd_stats** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto a = unwrap<ffdd::BundleProfile>(group_a, count_a);
    const auto b = unwrap<ffdd::BundleProfile>(group_b, count_b);
    *out = new ffdd_stats{ffdd::compare_groups(a, b, to_pipeline(config))};
  });
}

size_t ffdd_stats_size(const ffdd_stats* stats) {
  return stats == nullptr ? 0 : stats->value.size();
}

ffdd_status ffdd_stats_arrays(const ffdd_stats* stats, double* arc_fraction, double* t,
                              double* p, double* q, int* significant, size_t n) {
  return guarded([&] {
    require(stats != nullptr, "null stats");
    const auto& s = stats->value;
    require_length(n, s.size());
    for (std::size_t m = 0; m < n; ++m) {
      if (arc_fraction) arc_fraction[m] = s.arc_positions[m];
      if (t) t[m] = s.t[m];
      if (p) p[m] = s.p[m];
      if (q) q[m] = s.q[m];
      if (significant) significant[m] = s.significant[m] ? 1 : 0;
    }
  });
}

ffdd_status ffdd_stats_export(const ffdd_stats* stats, const char* path, ffdd_format format,
                              const char* metadata_json) {
  return guarded([&] {
    require(stats != nullptr && path != nullptr, "null argument");
    ffdd::export_stats(stats->value, path, to_format(format), metadata_of(metadata_json));
  });
}

void ffdd_stats_free(ffdd_stats* stats) { delete stats; }

ffdd_status ffdd_zscore(const ffdd_profile* subject, const ffdd_atlas* atlas,
                        const ffdd_config* config, ffdd_anomaly** out) {
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    require(subject != nullptr && atlas != nullptr && out != nullptr, "null argument");
    *out = new ffdd_anomaly{
        ffdd::subject_zscore(subject->value.profile, atlas->value, to_pipeline(config))};
  });
}

size_t ffdd_anomaly_size(const ffdd_anomaly* anomaly) {
  return anomaly == nullptr ? 0 : anomaly->value.z.size();
}

ffdd_status ffdd_anomaly_arrays(const ffdd_anomaly* anomaly, double* arc_fraction, double* z,
                                int* defined, size_t n) {
  return guarded([&] {
    require(anomaly != nullptr, "null anomaly map");
    const auto& a = anomaly->value;
    require_length(n, a.z.size());
    for (std::size_t m = 0; m < n; ++m) {
      if (arc_fraction) arc_fraction[m] = a.arc_positions[m];
      if (z) z[m] = a.z[m];
      if (defined) defined[m] = a.defined[m] ? 1 : 0;
    }
  });
}

ffdd_status ffdd_anomaly_export(const ffdd_anomaly* anomaly, const char* path,
                                ffdd_format format, const char* metadata_json) {
  return guarded([&] {
    require(anomaly != nullptr && path != nullptr, "null argument");
    ffdd::export_anomaly(anomaly->value, path, to_format(format), metadata_of(metadata_json));
  });
}

void ffdd_anomaly_free(ffdd_anomaly* anomaly) { delete anomaly; }

}  // extern "C"
