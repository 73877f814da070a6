#include "ffdd/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ffdd/error.hpp"

namespace ffdd {
namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct Frame {
  Vec3 normal;
  Vec3 binormal;
};

Frame frame_at(const Vec3& tangent) {
  Vec3 up{0.0, 0.0, 1.0};
  if (std::abs(dot(up, tangent)) > 0.9) up = {0.0, 1.0, 0.0};
  const Vec3 n = normalized(up - tangent * dot(up, tangent));
  return {n, cross(tangent, n)};
}

/// L * integral of tan(u * fan(s')) ds' from `anchor` to s (Simpson).
double lateral_offset(const GroundTruth& truth, double u, double anchor, double s) {
  const double length = truth.spec().centerline.length();
  const double span = s - anchor;
  if (span == 0.0 || u == 0.0) return 0.0;
  int steps = std::max(2, static_cast<int>(std::ceil(std::abs(span) * 512.0)));
  steps += steps % 2;
  const double h = span / steps;
  auto f = [&](double x) { return std::tan(u * truth.fan_angle_deg(x) * kDeg); };
  double sum = f(anchor) + f(s);
  for (int k = 1; k < steps; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(anchor + k * h);
  return length * sum * h / 3.0;
}

const ChannelGenerator* find_channel(const SyntheticSpec& spec, std::string_view name,
                                     std::size_t* index = nullptr) {
  for (std::size_t c = 0; c < spec.channels.size(); ++c)
    if (spec.channels[c].name == name) {
      if (index) *index = c;
      return &spec.channels[c];
    }
  throw Error(ErrorCode::kUnknownChannel,
              "synthetic spec has no channel '" + std::string(name) + "'");
}

double clamp_channel(std::string_view name, double v) {
  return name == "FA" ? std::clamp(v, 0.0, 1.0) : v;
}

[[noreturn]] void spec_fail(const std::string& msg) {
  throw Error(ErrorCode::kParse, "synthetic spec: " + msg);
}

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) spec_fail("expected a 3-vector, got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Lesion lesion_from(const json& j) {
  Lesion l;
  l.center = j.value("center", l.center);
  l.width = j.value("width", l.width);
  l.delta = j.value("delta", l.delta);
  return l;
}

json lesion_json(const Lesion& l) {
  return {{"center", l.center}, {"width", l.width}, {"delta", l.delta}};
}

}  // namespace

double Random::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::size_t Random::index(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

double Centerline::length() const {
  switch (kind) {
    case CenterlineKind::kLine: return line_length;
    case CenterlineKind::kArc: return arc_radius * arc_angle_deg * kDeg;
    case CenterlineKind::kHelix:
      return 2.0 * kPi * helix_turns * std::hypot(helix_radius, helix_pitch);
  }
  return 0.0;
}

Vec3 Centerline::point(double s) const {
  switch (kind) {
    case CenterlineKind::kLine: return origin + normalized(direction) * (s * line_length);
    case CenterlineKind::kArc: {
      const double a = s * arc_angle_deg * kDeg;
      return {arc_radius * std::cos(a), arc_radius * std::sin(a), 0.0};
    }
    case CenterlineKind::kHelix: {
      const double t = s * 2.0 * kPi * helix_turns;
      return {helix_radius * std::cos(t), helix_radius * std::sin(t), helix_pitch * t};
    }
  }
  return {};
}

Vec3 Centerline::tangent(double s) const {
  switch (kind) {
    case CenterlineKind::kLine: return normalized(direction);
    case CenterlineKind::kArc: {
      const double a = s * arc_angle_deg * kDeg;
      return {-std::sin(a), std::cos(a), 0.0};
    }
    case CenterlineKind::kHelix: {
      const double t = s * 2.0 * kPi * helix_turns;
      return normalized(Vec3{-helix_radius * std::sin(t), helix_radius * std::cos(t), helix_pitch});
    }
  }
  return {};
}

double Centerline::project(const Vec3& p) const {
  switch (kind) {
    case CenterlineKind::kLine:
      return std::clamp(dot(p - origin, normalized(direction)) / line_length, 0.0, 1.0);
    case CenterlineKind::kArc: {
      double a = std::atan2(p.y, p.x);
      if (a < -0.5 * kPi) a += 2.0 * kPi;
      return std::clamp(a / (arc_angle_deg * kDeg), 0.0, 1.0);
    }
    case CenterlineKind::kHelix: {
      constexpr int kCoarse = 4096;
      auto dist2 = [&](double s) {
        const Vec3 d = point(s) - p;
        return dot(d, d);
      };
      int best = 0;
      for (int k = 1; k <= kCoarse; ++k)
        if (dist2(static_cast<double>(k) / kCoarse) < dist2(static_cast<double>(best) / kCoarse))
          best = k;
      double lo = std::max(0.0, (best - 1.0) / kCoarse);
      double hi = std::min(1.0, (best + 1.0) / kCoarse);
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 100; ++it) {
        const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
        if (dist2(a) < dist2(b)) hi = b;
        else lo = a;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double Lesion::value(double s) const {
  const double x = s - center;
  if (std::abs(x) > 0.5 * width) return 0.0;
  return delta * 0.5 * (1.0 + std::cos(2.0 * kPi * x / width));
}

void validate(const SyntheticSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kValidation, msg); };
  if (spec.fiber_count < 1) fail("fiber_count must be >= 1");
  if (spec.vertices_per_fiber < 2) fail("vertices_per_fiber must be >= 2");
  if (!(spec.tube_radius > 0.0)) fail("tube_radius must be > 0");
  if (!(spec.centerline.length() > 0.0)) fail("centerline length must be > 0");
  if (spec.noise_std < 0.0) fail("noise_std must be >= 0");
  auto check_lesion = [&](const Lesion& l, const std::string& what) {
    if (!(l.width > 0.0 && l.width <= 1.0)) fail(what + " width must lie in (0, 1]");
    if (!(l.center >= 0.0 && l.center <= 1.0)) fail(what + " center must lie in [0, 1]");
  };
  if (spec.fan_lesion) check_lesion(*spec.fan_lesion, "fan lesion");
  for (const auto& c : spec.channels) {
    if (c.name.empty() || c.name.find_first_of(" \t,") != std::string::npos)
      fail("channel name '" + c.name + "' must be non-empty without spaces or commas");
    if (c.lesion) check_lesion(*c.lesion, c.name + " lesion");
    if (c.noise_std < 0.0 || c.vertex_noise_std < 0.0) fail(c.name + " noise must be >= 0");
  }
}

GroundTruth::GroundTruth(SyntheticSpec spec, std::vector<double> fan_fractions,
                         std::vector<std::vector<double>> field_coefficients)
    : spec_(std::move(spec)),
      fan_fractions_(std::move(fan_fractions)),
      field_(std::move(field_coefficients)) {}

double GroundTruth::clean_channel(std::string_view channel, double s) const {
  const ChannelGenerator* c = find_channel(spec_, channel);
  return c->baseline + (c->lesion ? c->lesion->value(s) : 0.0);
}

double GroundTruth::realized_channel(std::string_view channel, double s) const {
  std::size_t index = 0;
  const ChannelGenerator* c = find_channel(spec_, channel, &index);
  double field = 0.0;
  if (c->noise_std > 0.0) {
    const auto& coef = field_[index];
    for (int f = 0; f < kFieldModes; ++f) {
      const double w = 2.0 * kPi * (f + 1) * s;
      field += coef[2 * f] * std::cos(w) + coef[2 * f + 1] * std::sin(w);
    }
    field *= c->noise_std / std::sqrt(static_cast<double>(kFieldModes));
  }
  return clean_channel(channel, s) + field;
}

double GroundTruth::fan_angle_deg(double s) const {
  return spec_.fan_angle_deg + (spec_.fan_lesion ? spec_.fan_lesion->value(s) : 0.0);
}

double GroundTruth::ffd(double s) const {
  const double a = fan_angle_deg(s) * kDeg;
  double sum = 0.0;
  for (double u : fan_fractions_) sum += std::cos(u * a);
  return sum / static_cast<double>(fan_fractions_.size());
}

std::string GroundTruth::to_json(std::size_t samples) const {
  json j;
  j["format"] = "ffdd-oracle";
  j["version"] = 1;
  j["name"] = spec_.name;
  j["spec"] = json::parse(format_synthetic_spec(spec_));
  std::vector<double> s(samples), fan(samples), flux(samples);
  for (std::size_t m = 0; m < samples; ++m) {
    s[m] = samples > 1 ? static_cast<double>(m) / static_cast<double>(samples - 1) : 0.0;
    fan[m] = fan_angle_deg(s[m]);
    flux[m] = ffd(s[m]);
  }
  j["s"] = s;
  j["fan_angle_deg"] = fan;
  j["ffd"] = flux;
  json clean = json::object(), realized = json::object(), ffdd = json::object();
  for (const auto& c : spec_.channels) {
    std::vector<double> cv(samples), rv(samples), fv(samples);
    for (std::size_t m = 0; m < samples; ++m) {
      cv[m] = clean_channel(c.name, s[m]);
      rv[m] = realized_channel(c.name, s[m]);
      fv[m] = cv[m] * flux[m];
    }
    clean[c.name] = cv;
    realized[c.name] = rv;
    ffdd[c.name] = fv;
  }
  j["clean"] = clean;
  j["realized"] = realized;
  j["clean_ffdd"] = ffdd;
  return j.dump(2) + "\n";
}

SyntheticBundle generate_bundle(const SyntheticSpec& spec) {
  validate(spec);
  Random rng(spec.seed);
  const std::size_t n_fibers = spec.fiber_count;
  const std::size_t n_vertices = spec.vertices_per_fiber;

  // 1. tube offsets, uniform over the disk
  std::vector<double> off_n(n_fibers), off_b(n_fibers);
  for (std::size_t f = 0; f < n_fibers; ++f) {
    const double r = spec.tube_radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * kPi * rng.uniform();
    off_n[f] = r * std::cos(phi);
    off_b[f] = r * std::sin(phi);
  }
  // 2. stratified fan fractions, shuffled over fibers (Fisher-Yates)
  std::vector<double> fan(n_fibers);
  for (std::size_t f = 0; f < n_fibers; ++f)
    fan[f] = n_fibers > 1 ? -1.0 + (2.0 * f + 1.0) / static_cast<double>(n_fibers) : 0.0;
  for (std::size_t f = n_fibers; f > 1; --f) std::swap(fan[f - 1], fan[rng.index(f)]);
  // 3. smooth noise field per channel
  std::vector<std::vector<double>> field(spec.channels.size());
  for (auto& coef : field) {
    coef.resize(2 * kFieldModes);
    for (double& v : coef) v = rng.normal();
  }

  SyntheticBundle out{FiberBundle{}, GroundTruth(spec, fan, field)};
  const GroundTruth& truth = out.truth;
  FiberBundle& bundle = out.bundle;
  bundle.name = spec.name;
  for (const auto& c : spec.channels) bundle.channels.push_back(c.name);
  bundle.fibers.resize(n_fibers);

  const double anchor = spec.fan_lesion ? spec.fan_lesion->center : 0.5;
  // 4. vertices: jitter (3 normals) then per-channel vertex noise, per vertex
  for (std::size_t f = 0; f < n_fibers; ++f) {
    auto& fiber = bundle.fibers[f];
    fiber.vertices.resize(n_vertices);
    fiber.scalars.assign(spec.channels.size(), std::vector<double>(n_vertices));
    for (std::size_t k = 0; k < n_vertices; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(n_vertices - 1);
      const Frame fr = frame_at(spec.centerline.tangent(s));
      const double lateral = lateral_offset(truth, fan[f], anchor, s);
      Vec3 p = spec.centerline.point(s) + fr.normal * (off_n[f] + lateral) +
               fr.binormal * off_b[f];
      const Vec3 jitter{rng.normal(), rng.normal(), rng.normal()};
      p += jitter * spec.noise_std;
      fiber.vertices[k] = p;
      for (std::size_t c = 0; c < spec.channels.size(); ++c) {
        const auto& gen = spec.channels[c];
        const double noise = rng.normal() * gen.vertex_noise_std;
        fiber.scalars[c][k] = clamp_channel(gen.name, truth.realized_channel(gen.name, s) + noise);
      }
    }
  }
  validate(bundle);
  return out;
}

SyntheticSpec parse_synthetic_spec(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    spec_fail(std::string("invalid JSON at byte ") + std::to_string(e.byte));
  }
  if (!j.is_object()) spec_fail("top level must be an object");
  SyntheticSpec spec;
  try {
    spec.name = j.value("name", spec.name);
    if (j.contains("centerline")) {
      const json& c = j["centerline"];
      const std::string type = c.value("type", std::string("line"));
      Centerline& cl = spec.centerline;
      if (type == "line") {
        cl.kind = CenterlineKind::kLine;
        if (c.contains("origin")) cl.origin = vec_from(c["origin"]);
        if (c.contains("direction")) cl.direction = vec_from(c["direction"]);
        cl.line_length = c.value("length", cl.line_length);
      } else if (type == "arc") {
        cl.kind = CenterlineKind::kArc;
        cl.arc_radius = c.value("radius", cl.arc_radius);
        cl.arc_angle_deg = c.value("angle_deg", cl.arc_angle_deg);
      } else if (type == "helix") {
        cl.kind = CenterlineKind::kHelix;
        cl.helix_radius = c.value("radius", cl.helix_radius);
        cl.helix_pitch = c.value("pitch", cl.helix_pitch);
        cl.helix_turns = c.value("turns", cl.helix_turns);
      } else {
        spec_fail("unknown centerline type '" + type + "'");
      }
    }
    spec.fiber_count = j.value("fiber_count", spec.fiber_count);
    spec.vertices_per_fiber = j.value("vertices_per_fiber", spec.vertices_per_fiber);
    spec.tube_radius = j.value("tube_radius", spec.tube_radius);
    spec.fan_angle_deg = j.value("fan_angle_deg", spec.fan_angle_deg);
    if (j.contains("fan_lesion") && !j["fan_lesion"].is_null())
      spec.fan_lesion = lesion_from(j["fan_lesion"]);
    spec.noise_std = j.value("noise_std", spec.noise_std);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("channels")) {
      for (const auto& c : j["channels"]) {
        ChannelGenerator g;
        g.name = c.at("name").get<std::string>();
        g.baseline = c.value("baseline", 0.0);
        g.noise_std = c.value("noise_std", 0.0);
        g.vertex_noise_std = c.value("vertex_noise_std", 0.0);
        if (c.contains("lesion") && !c["lesion"].is_null()) g.lesion = lesion_from(c["lesion"]);
        spec.channels.push_back(std::move(g));
      }
    }
  } catch (const json::exception& e) {
    spec_fail(e.what());
  }
  validate(spec);
  return spec;
}

std::string format_synthetic_spec(const SyntheticSpec& spec) {
  json j;
  j["name"] = spec.name;
  const Centerline& cl = spec.centerline;
  switch (cl.kind) {
    case CenterlineKind::kLine:
      j["centerline"] = {{"type", "line"},
                         {"origin", {cl.origin.x, cl.origin.y, cl.origin.z}},
                         {"direction", {cl.direction.x, cl.direction.y, cl.direction.z}},
                         {"length", cl.line_length}};
      break;
    case CenterlineKind::kArc:
      j["centerline"] = {{"type", "arc"}, {"radius", cl.arc_radius}, {"angle_deg", cl.arc_angle_deg}};
      break;
    case CenterlineKind::kHelix:
      j["centerline"] = {{"type", "helix"},
                         {"radius", cl.helix_radius},
                         {"pitch", cl.helix_pitch},
                         {"turns", cl.helix_turns}};
      break;
  }
  j["fiber_count"] = spec.fiber_count;
  j["vertices_per_fiber"] = spec.vertices_per_fiber;
  j["tube_radius"] = spec.tube_radius;
  j["fan_angle_deg"] = spec.fan_angle_deg;
  j["fan_lesion"] = spec.fan_lesion ? lesion_json(*spec.fan_lesion) : json(nullptr);
  j["noise_std"] = spec.noise_std;
  j["seed"] = spec.seed;
  json channels = json::array();
  for (const auto& c : spec.channels)
    channels.push_back({{"name", c.name},
                        {"baseline", c.baseline},
                        {"noise_std", c.noise_std},
                        {"vertex_noise_std", c.vertex_noise_std},
                        {"lesion", c.lesion ? lesion_json(*c.lesion) : json(nullptr)}});
  j["channels"] = channels;
  return j.dump(2) + "\n";
}

}  // namespace ffdd
