#include "ffdd/descriptor.hpp"

#include <cmath>

#include "ffdd/error.hpp"
#include "ffdd/parallel.hpp"

namespace ffdd {
namespace {

std::string describe(const Vec3& p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
         std::to_string(p.z) + ")";
}

struct ChannelSpec {
  enum class Kind { kFlux, kWeighted, kPlain } kind = Kind::kFlux;
  std::size_t index = 0;
};

ChannelSpec resolve_channel(const FiberBundle& bundle, std::string_view channel) {
  if (channel == kFluxChannel) return {};
  ChannelSpec spec{ChannelSpec::Kind::kWeighted, 0};
  std::string_view name = channel;
  if (name.starts_with(kPlainPrefix)) {
    spec.kind = ChannelSpec::Kind::kPlain;
    name.remove_prefix(kPlainPrefix.size());
  }
  const auto index = bundle.channel_index(name);
  if (!index)
    throw Error(ErrorCode::kUnknownChannel,
                "channel '" + std::string(name) + "' not present in bundle '" +
                    bundle.name + "'");
  spec.index = *index;
  return spec;
}

double rms_distance(const PlaneIntersections& hits, const Vec3& p) {
  double sum = 0.0;
  for (const Vec3& x : hits.points) {
    const Vec3 d = x - p;
    sum += dot(d, d);
  }
  return std::sqrt(sum / static_cast<double>(hits.count()));
}

Vec3 mean_tangent(const PlaneIntersections& hits) {
  Vec3 sum;
  for (const Vec3& t : hits.tangents) sum += t;
  return normalized(sum);
}

}  // namespace

PlaneIntersections plane_intersections(const FiberBundle& bundle,
                                       const CuttingPlane& plane) {
  const std::size_t channels = bundle.channels.size();
  PlaneIntersections out;
  out.scalars.resize(channels);
  for (std::size_t f = 0; f < bundle.fibers.size(); ++f) {
    const auto& fiber = bundle.fibers[f];
    const auto& v = fiber.vertices;
    bool found = false;
    double best = 0.0;
    Vec3 best_point, best_tangent;
    std::size_t best_segment = 0;
    double best_t = 0.0;

    double d0 = v.empty() ? 0.0 : dot(v[0] - plane.point, plane.normal);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double d1 = dot(v[i + 1] - plane.point, plane.normal);
      // Zero counts as the positive side, so a vertex lying on the plane
      // yields exactly one crossing.
      if ((d0 < 0.0) != (d1 < 0.0)) {
        const double t = d0 / (d0 - d1);
        const Vec3 x = lerp(v[i], v[i + 1], t);
        const double dist = norm(x - plane.point);
        if (dist <= plane.radius && (!found || dist < best)) {
          found = true;
          best = dist;
          best_point = x;
          best_tangent = normalized(v[i + 1] - v[i]);
          best_segment = i;
          best_t = t;
        }
      }
      d0 = d1;
    }
    if (!found) continue;
    out.points.push_back(best_point);
    out.tangents.push_back(best_tangent);
    out.fiber_index.push_back(f);
    for (std::size_t c = 0; c < channels; ++c) {
      const auto& s = fiber.scalars[c];
      out.scalars[c].push_back(s[best_segment] +
                               best_t * (s[best_segment + 1] - s[best_segment]));
    }
  }
  return out;
}

PlaneSearchResult optimize_plane_normal(const FiberBundle& bundle,
                                        const Vec3& p, const Vec3& init,
                                        const PlaneSearchOptions& options) {
  if (!(options.tol > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "plane search tol must be > 0");
  const Vec3 start = normalized(init);
  if (norm(start) == 0.0)
    throw Error(ErrorCode::kInvalidArgument, "initial plane normal is zero");

  PlaneSearchResult result;
  result.plane = {p, start, kUnbounded};
  switch (options.radius.policy) {
    case RadiusPolicy::kUnbounded:
      break;
    case RadiusPolicy::kFixed:
      if (!(options.radius.value > 0.0))
        throw Error(ErrorCode::kInvalidArgument, "plane radius must be > 0");
      result.plane.radius = options.radius.value;
      break;
    case RadiusPolicy::kAuto: {
      const auto initial = plane_intersections(bundle, result.plane);
      if (initial.count() == 0)
        throw Error(ErrorCode::kEmptyCrossSection,
                    "no fiber crosses the plane at " + describe(p));
      const double rms = rms_distance(initial, p);
      if (rms > 0.0) result.plane.radius = options.radius.value * rms;
      break;
    }
  }

  for (;;) {
    result.intersections = plane_intersections(bundle, result.plane);
    if (result.intersections.count() == 0)
      throw Error(ErrorCode::kEmptyCrossSection,
                  "no fiber crosses the plane at " + describe(p));
    Vec3 next = mean_tangent(result.intersections);
    if (norm(next) == 0.0) return result;  // tangents cancel; keep iterate
    if (dot(next, start) < 0.0) next = -next;
    if (angle_between(next, result.plane.normal) < options.tol) {
      result.converged = true;
      return result;
    }
    if (result.iterations >= options.max_iter) return result;
    result.plane.normal = next;
    ++result.iterations;
  }
}

FFDDVector evaluate_channel(const FiberBundle& bundle,
                            const PlaneIntersections& hits, const Vec3& normal,
                            std::string_view channel) {
  const ChannelSpec spec = resolve_channel(bundle, channel);
  if (hits.count() == 0)
    throw Error(ErrorCode::kEmptyCrossSection, "empty cross-section");
  double sum = 0.0;
  for (std::size_t i = 0; i < hits.count(); ++i) {
    const double flux = dot(hits.tangents[i], normal);
    switch (spec.kind) {
      case ChannelSpec::Kind::kFlux: sum += flux; break;
      case ChannelSpec::Kind::kWeighted: sum += hits.scalars[spec.index][i] * flux; break;
      case ChannelSpec::Kind::kPlain: sum += hits.scalars[spec.index][i]; break;
    }
  }
  return {sum / static_cast<double>(hits.count()), normal, std::string(channel)};
}

void require_channel(const FiberBundle& bundle, std::string_view channel) {
  resolve_channel(bundle, channel);
}

FFDDVector ffd_at(const FiberBundle& bundle, const CuttingPlane& plane) {
  const auto hits = plane_intersections(bundle, plane);
  if (hits.count() == 0)
    throw Error(ErrorCode::kEmptyCrossSection,
                "no fiber crosses the plane at " + describe(plane.point));
  return evaluate_channel(bundle, hits, plane.normal, kFluxChannel);
}

FFDDVector ffdd_at(const FiberBundle& bundle, const CuttingPlane& plane,
                   std::string_view channel) {
  require_channel(bundle, channel);
  const auto hits = plane_intersections(bundle, plane);
  if (hits.count() == 0)
    throw Error(ErrorCode::kEmptyCrossSection,
                "no fiber crosses the plane at " + describe(plane.point));
  return evaluate_channel(bundle, hits, plane.normal, channel);
}

TractProfile tract_profile(const FiberBundle& bundle, const MeanFiber& mean,
                           std::string_view channel,
                           const ProfileConfig& config) {
  require_channel(bundle, channel);
  const std::size_t count = mean.size();
  if (count < 2)
    throw Error(ErrorCode::kInvalidArgument, "mean fiber has fewer than 2 samples");

  TractProfile profile;
  profile.bundle_name = bundle.name;
  profile.channel = std::string(channel);
  profile.arc_length = mean.arc_length;
  profile.entries.resize(count);
  profile.arc_positions.resize(count);
  std::vector<char> valid(count, 0);
  std::vector<char> converged(count, 1);

  parallel_for(count, [&](std::size_t m) {
    profile.arc_positions[m] = static_cast<double>(m) / static_cast<double>(count - 1);
    try {
      const auto found = optimize_plane_normal(bundle, mean.samples[m],
                                               mean.tangents[m], config.plane);
      profile.entries[m] = evaluate_channel(bundle, found.intersections,
                                            found.plane.normal, channel);
      converged[m] = found.converged ? 1 : 0;
      valid[m] = 1;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyCrossSection || config.empty == EmptyPolicy::kFail)
        throw Error(e.code(), "sample " + std::to_string(m) + ": " + e.what());
    }
  });

  for (std::size_t m = 0; m < count; ++m)
    if (!converged[m]) profile.unconverged.push_back(m);

  std::vector<std::size_t> good;
  for (std::size_t m = 0; m < count; ++m)
    if (valid[m]) good.push_back(m);
  if (good.empty())
    throw Error(ErrorCode::kEmptyCrossSection,
                "every cross-section of '" + bundle.name + "' is empty");

  // Linear fill between the nearest valid neighbours; constant past the ends.
  std::size_t next_good = 0;
  for (std::size_t m = 0; m < count; ++m) {
    if (valid[m]) continue;
    profile.filled.push_back(m);
    while (next_good < good.size() && good[next_good] < m) ++next_good;
    const bool has_left = next_good > 0;
    const bool has_right = next_good < good.size();
    FFDDVector& entry = profile.entries[m];
    entry.channel = profile.channel;
    if (has_left && has_right) {
      const std::size_t l = good[next_good - 1], r = good[next_good];
      const double t = static_cast<double>(m - l) / static_cast<double>(r - l);
      const auto& a = profile.entries[l];
      const auto& b = profile.entries[r];
      entry.magnitude = a.magnitude + t * (b.magnitude - a.magnitude);
      entry.direction = normalized(lerp(a.direction, b.direction, t));
    } else {
      entry = profile.entries[has_left ? good[next_good - 1] : good[next_good]];
    }
    if (norm(entry.direction) == 0.0) entry.direction = mean.tangents[m];
  }
  return profile;
}

}  // namespace ffdd
