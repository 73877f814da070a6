#include "ffdd/stats.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ffdd/error.hpp"
#include "ffdd/parallel.hpp"

namespace ffdd {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_shape(const TractProfile& a, const TractProfile& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kLengthMismatch,
                "profiles have " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + " samples");
  if (a.channel != b.channel)
    throw Error(ErrorCode::kChannelMismatch,
                "profiles carry different channels: '" + a.channel + "' vs '" +
                    b.channel + "'");
}

void require_cohort(std::span<const TractProfile> profiles, const char* what) {
  if (profiles.empty())
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is empty");
  for (const auto& p : profiles) require_same_shape(profiles.front(), p);
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(std::span<const TractProfile> group, std::size_t m) {
  const double n = static_cast<double>(group.size());
  Moments out;
  for (const auto& p : group) out.mean += p.entries[m].magnitude;
  out.mean /= n;
  for (const auto& p : group) {
    const double d = p.entries[m].magnitude - out.mean;
    out.var += d * d;
  }
  out.var = group.size() > 1 ? out.var / (n - 1.0) : 0.0;
  return out;
}

}  // namespace

std::vector<double> pairwise_dissimilarity(const TractProfile& a,
                                           const TractProfile& b) {
  require_same_shape(a, b);
  std::vector<double> d(a.size());
  for (std::size_t m = 0; m < a.size(); ++m)
    d[m] = norm(a.entries[m].vector() - b.entries[m].vector());
  return d;
}

double global_dissimilarity(const TractProfile& a, const TractProfile& b,
                            const AlignmentPath& path) {
  const std::vector<double> d = pairwise_dissimilarity(a, b);
  if (path.samples.size() != d.size())
    throw Error(ErrorCode::kLengthMismatch,
                "path has " + std::to_string(path.samples.size()) +
                    " samples, profiles have " + std::to_string(d.size()));
  double total = 0.0;
  for (std::size_t m = 1; m < d.size(); ++m) {
    const double step = std::hypot(path.samples[m].i - path.samples[m - 1].i,
                                   path.samples[m].j - path.samples[m - 1].j);
    total += 0.5 * (d[m] + d[m - 1]) * step;
  }
  return total;
}

ReferenceProfile reference_profile(std::span<const TractProfile> profiles,
                                   std::span<const MeanFiber> fibers) {
  require_cohort(profiles, "cohort");
  if (fibers.size() != profiles.size())
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(profiles.size()) + " profiles but " +
                    std::to_string(fibers.size()) + " mean fibers");
  const std::size_t count = profiles.front().size();
  for (const auto& f : fibers)
    if (f.size() != count)
      throw Error(ErrorCode::kLengthMismatch,
                  "mean fiber has " + std::to_string(f.size()) +
                      " samples, profiles have " + std::to_string(count));

  const double n = static_cast<double>(profiles.size());
  ReferenceProfile ref;
  TractProfile& out = ref.profile;
  out.bundle_name = "reference";
  out.channel = profiles.front().channel;
  out.arc_positions = profiles.front().arc_positions;
  out.entries.resize(count);
  ref.fiber.assign(count, Vec3{});
  for (const auto& f : fibers) out.arc_length += f.arc_length / n;

  for (std::size_t m = 0; m < count; ++m) {
    Vec3 sum;
    double magnitude_sum = 0.0;
    for (const auto& p : profiles) {
      sum += p.entries[m].vector();
      magnitude_sum += std::abs(p.entries[m].magnitude);
    }
    for (const auto& f : fibers) ref.fiber[m] += f.samples[m] * (1.0 / n);
    const Vec3 mean = sum * (1.0 / n);
    const double length = norm(mean);
    FFDDVector& e = out.entries[m];
    e.channel = out.channel;
    e.magnitude = length;
    e.direction = length > 0.0 ? mean * (1.0 / length)
                               : profiles.front().entries[m].direction;
    if (length < kCancellationFraction * magnitude_sum / n) ref.cancelled.push_back(m);
  }
  return ref;
}

TractProfile align_to_reference(const TractProfile& subject,
                                const TractProfile& reference,
                                const AlignOptions& options) {
  const Alignment alignment = align_profiles(subject, reference, options);
  std::vector<GridPoint> path = alignment.raw_path;
  for (std::size_t k = 1; k < path.size(); ++k) {
    path[k].i = std::max(path[k].i, path[k - 1].i);
    path[k].j = std::max(path[k].j, path[k - 1].j);
  }

  // For each reference sample r, the subject position where the path enters
  // column r and where it leaves it; their midpoint is the correspondence.
  std::vector<double> positions(reference.size());
  std::size_t k = 0;
  for (std::size_t r = 0; r < reference.size(); ++r) {
    const double target = static_cast<double>(r);
    while (k + 1 < path.size() && path[k + 1].j < target) ++k;
    double enter = path[k].i;
    std::size_t e = k;
    if (path[e].j < target && e + 1 < path.size()) {
      const double span = path[e + 1].j - path[e].j;
      const double t = span > 0.0 ? (target - path[e].j) / span : 0.0;
      enter = path[e].i + t * (path[e + 1].i - path[e].i);
      ++e;
    }
    double exit = enter;
    while (e < path.size() && path[e].j <= target) exit = path[e++].i;
    positions[r] = 0.5 * (enter + exit);
  }
  TractProfile aligned = interpolate_profile(subject, positions);
  aligned.arc_positions = reference.arc_positions;
  return aligned;
}

GroupAtlas build_atlas(std::span<const TractProfile> profiles,
                       std::span<const MeanFiber> fibers,
                       const AlignOptions& options) {
  if (profiles.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "an atlas needs at least 2 subjects");
  const ReferenceProfile ref = reference_profile(profiles, fibers);

  std::vector<TractProfile> aligned(profiles.size());
  parallel_for(profiles.size(), [&](std::size_t n) {
    try {
      aligned[n] = align_to_reference(profiles[n], ref.profile, options);
    } catch (const Error& e) {
      throw Error(e.code(), "subject " + std::to_string(n) + ": " + e.what());
    }
  });

  GroupAtlas atlas;
  atlas.channel = ref.profile.channel;
  atlas.cohort_size = profiles.size();
  atlas.arc_positions = ref.profile.arc_positions;
  atlas.reference_profile = ref.profile.entries;
  atlas.reference_fiber = ref.fiber;
  atlas.mean.resize(ref.profile.size());
  atlas.std.resize(ref.profile.size());
  for (std::size_t m = 0; m < ref.profile.size(); ++m) {
    const Moments mo = moments(aligned, m);
    atlas.mean[m] = mo.mean;
    atlas.std[m] = std::sqrt(mo.var);
  }
  return atlas;
}

AnomalyMap zscore_profile(const TractProfile& subject, const GroupAtlas& atlas) {
  if (subject.size() != atlas.size())
    throw Error(ErrorCode::kLengthMismatch,
                "subject has " + std::to_string(subject.size()) +
                    " samples, atlas has " + std::to_string(atlas.size()));
  AnomalyMap out;
  out.arc_positions = atlas.arc_positions;
  out.z.resize(atlas.size());
  out.defined.resize(atlas.size());
  for (std::size_t m = 0; m < atlas.size(); ++m) {
    if (atlas.std[m] > 0.0) {
      out.z[m] = (std::abs(subject.entries[m].magnitude) - atlas.mean[m]) / atlas.std[m];
      out.defined[m] = 1;
    } else {
      out.z[m] = kNaN;
      out.defined[m] = 0;
    }
  }
  return out;
}

double student_t_two_tailed(double t, double df) {
  if (std::isnan(t)) return kNaN;
  if (std::isinf(t)) return 0.0;
  // P(|T| > |t|) = I_{df / (df + t^2)}(df / 2, 1 / 2)
  return boost::math::ibeta(0.5 * df, 0.5, df / (df + t * t));
}

PointwiseStats pointwise_ttest(std::span<const TractProfile> group_a,
                               std::span<const TractProfile> group_b,
                               TTestKind kind) {
  if (group_a.size() < 2 || group_b.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "each group needs at least 2 subjects");
  require_cohort(group_a, "group A");
  require_cohort(group_b, "group B");
  if (group_a.front().size() != group_b.front().size())
    throw Error(ErrorCode::kLengthMismatch, "groups have different profile lengths");

  PointwiseStats out;
  out.n_a = group_a.size();
  out.n_b = group_b.size();
  const std::size_t count = group_a.front().size();
  out.arc_positions = group_a.front().arc_positions;
  out.t.resize(count);
  out.p.resize(count);
  out.degenerate.assign(count, 0);
  const double na = static_cast<double>(out.n_a), nb = static_cast<double>(out.n_b);

  for (std::size_t m = 0; m < count; ++m) {
    const Moments a = moments(group_a, m);
    const Moments b = moments(group_b, m);
    const double diff = a.mean - b.mean;
    double se2, df;
    if (kind == TTestKind::kPooled) {
      df = na + nb - 2.0;
      const double pooled = ((na - 1.0) * a.var + (nb - 1.0) * b.var) / df;
      se2 = pooled * (1.0 / na + 1.0 / nb);
    } else {
      const double va = a.var / na, vb = b.var / nb;
      se2 = va + vb;
      df = se2 > 0.0 ? se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0))
                     : na + nb - 2.0;
    }
    if (se2 > 0.0) {
      out.t[m] = diff / std::sqrt(se2);
      out.p[m] = student_t_two_tailed(out.t[m], df);
    } else {
      out.degenerate[m] = 1;
      if (diff == 0.0) {
        out.t[m] = 0.0;
        out.p[m] = 1.0;
      } else {
        out.t[m] = std::copysign(std::numeric_limits<double>::infinity(), diff);
        out.p[m] = 0.0;
      }
    }
  }
  return out;
}

FdrResult fdr_correct(std::span<const double> p_values, double q) {
  const std::size_t count = p_values.size();
  for (double p : p_values)
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::kInvalidArgument, "p-values must lie in [0, 1]");
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_values[a] < p_values[b];
  });

  FdrResult out;
  out.q_values.resize(count);
  out.significant.assign(count, 0);
  const double total = static_cast<double>(count);

  std::size_t largest = 0;  // step-up: largest rank k with p_(k) <= k q / M
  for (std::size_t k = 1; k <= count; ++k)
    if (p_values[order[k - 1]] <= static_cast<double>(k) * q / total) largest = k;
  for (std::size_t k = 1; k <= largest; ++k) out.significant[order[k - 1]] = 1;

  double running = 1.0;
  for (std::size_t k = count; k >= 1; --k) {
    const double adjusted = p_values[order[k - 1]] * total / static_cast<double>(k);
    running = std::min(running, adjusted);
    out.q_values[order[k - 1]] = running;
  }
  return out;
}

PointwiseStats group_stats(std::span<const TractProfile> group_a,
                           std::span<const TractProfile> group_b, double q,
                           TTestKind kind) {
  PointwiseStats stats = pointwise_ttest(group_a, group_b, kind);
  FdrResult fdr = fdr_correct(stats.p, q);
  stats.q_level = q;
  stats.q = std::move(fdr.q_values);
  stats.significant = std::move(fdr.significant);
  return stats;
}

}  // namespace ffdd
