// Acceptance suite: one PASS/FAIL line per criterion, notes indented below.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ffdd/align.hpp"
#include "ffdd/bundle.hpp"
#include "ffdd/descriptor.hpp"
#include "ffdd/io.hpp"
#include "ffdd/parallel.hpp"
#include "ffdd/pipeline.hpp"
#include "ffdd/stats.hpp"
#include "ffdd/synth.hpp"
#include "fixtures/ttest_fixtures.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace ffdd;
using test::degrees;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    summary += (summary.empty() ? "" : "; ") + what + (ok ? "" : " [failed]");
  }
  void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ------------------------------------------------------------------ 1

Outcome eikonal_accuracy() {
  Outcome o;
  constexpr std::size_t kN = 101;
  const DistanceMap t = fmm_solve(kN, kN, std::vector<double>(kN * kN, 1.0));
  double far_half = 0.0, off_axis = 0.0;
  for (std::size_t i = 1; i < kN; ++i)
    for (std::size_t j = 1; j < kN; ++j) {
      const double exact = std::hypot(static_cast<double>(i), static_cast<double>(j));
      const double rel = std::abs(t.at(i, j) - exact) / exact;
      off_axis = std::max(off_axis, rel);
      if (i + j >= kN - 1) far_half = std::max(far_half, rel);
    }
  o.require(far_half < 0.02, "max relative error off the axes, far half " +
                                 fmt("%.3f%%", 100 * far_half) + " < 2%");
  o.note("whole off-axis grid max " + fmt("%.2f%%", 100 * off_axis) +
         " (first-order four-neighbour scheme, worst next to the source)");

  std::vector<double> f(kN * kN);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = 0.1 + std::fmod(0.618 * static_cast<double>(k), 1.0);
  const DistanceMap base = fmm_solve(kN, kN, f);
  double worst = 0.0;
  for (double c : {0.3, 2.5, 17.0}) {
    std::vector<double> scaled = f;
    for (double& v : scaled) v *= c;
    const DistanceMap tc = fmm_solve(kN, kN, scaled);
    for (std::size_t k = 0; k < f.size(); ++k)
      worst = std::max(worst, std::abs(tc.values[k] - c * base.values[k]) /
                                  std::max(1.0, c * base.values[k]));
  }
  o.require(worst <= 1e-12, "homogeneity error " + fmt("%.2g", worst) + " <= 1e-12");
  return o;
}

// ------------------------------------------------------------------ 2

Outcome flux_identities() {
  Outcome o;
  const FiberBundle parallel = test::parallel_bundle(12);
  const double p = ffd_at(parallel, {{50.5, 0, 0}, {1, 0, 0}, kUnbounded}).magnitude;
  o.require(std::abs(p - 1.0) <= 1e-9, "parallel FFD " + fmt("%.12f", p));

  FiberBundle tilt;
  const Vec3 d{0.5, std::sqrt(3.0) / 2.0, 0.0};
  for (int n = 0; n < 9; ++n) {
    const Vec3 c{0, 0.3 * n, static_cast<double>(n % 3)};
    tilt.fibers.push_back(test::straight_fiber(c - d * 20.0, c + d * 20.0, 41));
  }
  const double t = ffd_at(tilt, {{0, 1, 1}, {1, 0, 0}, kUnbounded}).magnitude;
  o.require(std::abs(t - 0.5) <= 1e-9, "60 deg tilt FFD " + fmt("%.12f", t));

  // dense-sampling oracle: mean of cos over 10^6 evenly spread fan angles
  constexpr int kDense = 1000000;
  double dense = 0.0;
  for (int k = 0; k < kDense; ++k)
    dense += std::cos((-1.0 + (2.0 * k + 1.0) / kDense) * std::numbers::pi / 6.0);
  dense /= kDense;
  SyntheticSpec spec;
  spec.name = "fan";
  spec.fan_angle_deg = 30.0;
  spec.fiber_count = 40;
  spec.vertices_per_fiber = 400;
  spec.channels = {{"MD", 7e-4, std::nullopt, 0.0, 0.0}};
  spec.seed = 5;
  const SyntheticBundle fan = generate_bundle(spec);
  const Centerline& line = fan.truth.spec().centerline;
  const CuttingPlane mid{line.point(0.5), line.tangent(0.5), kUnbounded};
  const double f = ffd_at(fan.bundle, mid).magnitude;
  o.require(std::abs(f - dense) <= 1e-3,
            "fan +/-30 deg FFD " + fmt("%.6f", f) + " vs dense " + fmt("%.6f", dense));

  bool exact = true;
  const double base = ffdd_at(fan.bundle, mid, "MD").magnitude;
  for (double c : {0.25, 4.0, 1024.0}) {
    FiberBundle scaled = fan.bundle;
    for (auto& fiber : scaled.fibers)
      for (double& v : fiber.scalars[0]) v *= c;
    exact = exact && ffdd_at(scaled, mid, "MD").magnitude == c * base;
  }
  o.require(exact, "FFDD(c S) == c FFDD(S) bit-exact for c = 1/4, 4, 1024");
  FiberBundle three = fan.bundle;
  for (auto& fiber : three.fibers)
    for (double& v : fiber.scalars[0]) v *= 3.0;
  o.note("c = 3 (not a power of two): relative difference " +
         fmt("%.2g", std::abs(ffdd_at(three, mid, "MD").magnitude - 3.0 * base) / (3.0 * base)));
  return o;
}

// ------------------------------------------------------------------ 3

// Flux of the plane through p with normal n, from scratch: nearest crossing
// of every fiber, tangent of the crossed segment.
double brute_flux(const FiberBundle& bundle, const Vec3& p, const Vec3& n) {
  double sum = 0.0;
  int count = 0;
  for (const auto& fiber : bundle.fibers) {
    const auto& v = fiber.vertices;
    double best = std::numeric_limits<double>::infinity();
    double flux = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const double a = (v[k].x - p.x) * n.x + (v[k].y - p.y) * n.y + (v[k].z - p.z) * n.z;
      const double b = (v[k + 1].x - p.x) * n.x + (v[k + 1].y - p.y) * n.y + (v[k + 1].z - p.z) * n.z;
      if ((a < 0.0) == (b < 0.0)) continue;
      const double w = a / (a - b);
      const double x = v[k].x + w * (v[k + 1].x - v[k].x) - p.x;
      const double y = v[k].y + w * (v[k + 1].y - v[k].y) - p.y;
      const double z = v[k].z + w * (v[k + 1].z - v[k].z) - p.z;
      const double dist = std::sqrt(x * x + y * y + z * z);
      if (dist < best) {
        best = dist;
        const double dx = v[k + 1].x - v[k].x, dy = v[k + 1].y - v[k].y, dz = v[k + 1].z - v[k].z;
        flux = (dx * n.x + dy * n.y + dz * n.z) / std::sqrt(dx * dx + dy * dy + dz * dz);
      }
    }
    if (std::isfinite(best)) {
      sum += flux;
      ++count;
    }
  }
  return count == 0 ? -2.0 : sum / count;
}

// Unit vector at polar angle theta (deg) from axis e, azimuth phi (deg).
Vec3 around(const Vec3& e, double theta, double phi) {
  const Vec3 helper = std::abs(e.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 u = normalized(cross(e, helper));
  const Vec3 w = cross(e, u);
  const double th = theta * std::numbers::pi / 180.0, ph = phi * std::numbers::pi / 180.0;
  return e * std::cos(th) + (u * std::cos(ph) + w * std::sin(ph)) * std::sin(th);
}

Outcome optimal_plane() {
  Outcome o;
  double worst = 0.0;
  bool converged = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec;
    spec.name = "fan";
    spec.fan_angle_deg = 30.0;
    spec.fiber_count = 24;
    spec.vertices_per_fiber = 120;
    spec.noise_std = 0.05;
    spec.seed = seed;
    spec.channels = {{"FA", 0.6, std::nullopt, 0.0, 0.0}};
    const FiberBundle bundle = reorient_bundle(generate_bundle(spec).bundle);
    const MeanFiber mean = mean_fiber(bundle);
    const CurvePoint at = sample_at(mean, 0.5);

    PlaneSearchOptions opts;
    opts.radius.policy = RadiusPolicy::kUnbounded;
    const PlaneSearchResult r = optimize_plane_normal(bundle, at.point, at.tangent, opts);
    converged = converged && r.converged;

    // hemisphere about the initial tangent at 1 deg, then 0.1 deg around the best
    Vec3 best = at.tangent;
    double best_flux = brute_flux(bundle, at.point, best);
    for (int th = 1; th <= 90; ++th)
      for (int ph = 0; ph < 360; ++ph) {
        const Vec3 n = around(at.tangent, th, ph);
        const double f = brute_flux(bundle, at.point, n);
        if (f > best_flux) {
          best_flux = f;
          best = n;
        }
      }
    const Vec3 coarse = best;
    for (int th = 0; th <= 15; ++th)
      for (int ph = 0; ph < 360; ph += th == 0 ? 360 : 3) {
        const Vec3 n = around(coarse, 0.1 * th, ph);
        const double f = brute_flux(bundle, at.point, n);
        if (f > best_flux) {
          best_flux = f;
          best = n;
        }
      }
    const double gap = degrees(angle_between(r.plane.normal, best));
    worst = std::max(worst, gap);
    o.note("seed " + std::to_string(seed) + ": " + fmt("%.3f deg", gap) + " from the argmax, flux " +
           fmt("%.6f", best_flux) + " vs " + fmt("%.6f", brute_flux(bundle, at.point, r.plane.normal)));
  }
  o.require(converged, "all searches converged");
  o.require(worst <= 0.5, "worst angle to the brute-force argmax " + fmt("%.3f", worst) + " deg <= 0.5");
  return o;
}

// ------------------------------------------------------------------ 4

double feature(double x) { return 0.5 + 0.3 * std::sin(3.0 * std::numbers::pi * x) + 0.2 * x; }

Outcome alignment_recovery() {
  Outcome o;
  constexpr std::size_t kM = 100;
  std::vector<double> a, b;
  for (std::size_t i = 0; i < kM; ++i) {
    const double x = static_cast<double>(i) / (kM - 1);
    a.push_back(feature(x));
    b.push_back(feature(x * x));
  }
  const Alignment warp = align_profiles(test::make_profile(a), test::make_profile(b));
  double worst = 0.0;
  for (const auto& p : warp.path.samples) {
    const double x = p.j / (kM - 1.0);
    worst = std::max(worst, std::abs(p.i - (kM - 1.0) * x * x));
  }
  o.require(warp.path.samples.size() == kM && worst <= 2.0,
            "s^2 warp recovered within " + fmt("%.3f", worst) + " cells at all 100 samples");

  AlignOptions options;
  const Alignment same = align_profiles(test::make_profile(a), test::make_profile(a), options);
  double off = 0.0;
  for (const auto& p : same.raw_path) off = std::max(off, std::abs(p.i - p.j));
  o.require(off <= options.epsilon + 1e-12,
            "identical pair off-diagonal " + fmt("%.2g", off) + " <= epsilon " + fmt("%.2g", options.epsilon));
  return o;
}

// ------------------------------------------------------------------ 5

Outcome mean_fiber_fidelity() {
  Outcome o;
  const double analytic = 25.0 * std::numbers::pi;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec;
    spec.centerline.kind = CenterlineKind::kArc;
    spec.centerline.arc_radius = 50.0;
    spec.centerline.arc_angle_deg = 90.0;
    spec.fiber_count = 20;
    spec.tube_radius = 1.0;
    spec.noise_std = 0.1;
    spec.seed = seed;
    const MeanFiber mean = mean_fiber(reorient_bundle(generate_bundle(spec).bundle));
    worst = std::max(worst, std::abs(mean.arc_length - analytic) / analytic);
  }
  o.require(worst < 0.02, "quarter-circle length error " + fmt("%.3f%%", 100 * worst) + " < 2% (5 seeds)");

  FiberStreamline helix;
  for (int v = 0; v < 200; ++v) {
    const double t = 4.0 * std::numbers::pi * v / 199.0;
    helix.vertices.push_back({std::cos(t), std::sin(t), 0.1 * t});
  }
  const CosineSeries series = fit_cosine_series(helix, 20);
  const auto s = chord_parameters(helix.vertices);
  const auto rows = test::cosine_rows(s, 20);
  std::vector<std::vector<double>> oracle(3);
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> y;
    for (const auto& v : helix.vertices) y.push_back(axis == 0 ? v.x : axis == 1 ? v.y : v.z);
    oracle[axis] = test::dense_least_squares(rows, y);
  }
  double fit = 0.0, oracle_fit = 0.0, gap = 0.0;
  for (std::size_t v = 0; v < s.size(); ++v) {
    const Vec3 lib = series.evaluate(s[v]);
    Vec3 ora;
    for (int k = 0; k <= 20; ++k) {
      const double c = std::cos(k * std::numbers::pi * s[v]);
      ora += Vec3{oracle[0][k], oracle[1][k], oracle[2][k]} * c;
    }
    const Vec3 r1 = lib - helix.vertices[v], r2 = ora - helix.vertices[v], r3 = lib - ora;
    fit += dot(r1, r1);
    oracle_fit += dot(r2, r2);
    gap += dot(r3, r3);
  }
  const double n = static_cast<double>(s.size());
  fit = std::sqrt(fit / n);
  oracle_fit = std::sqrt(oracle_fit / n);
  gap = std::sqrt(gap / n);
  o.require(fit < 0.02 && oracle_fit < 0.02,
            "helix fit RMS " + fmt("%.2e", fit) + " mm (oracle " + fmt("%.2e", oracle_fit) + ") < 0.02");
  o.require(gap < 1e-6, "library vs oracle curve RMS " + fmt("%.1e", gap));
  return o;
}

// ------------------------------------------------------------------ 6

SyntheticSpec cohort_member(std::uint64_t seed, double delta) {
  SyntheticSpec s;
  s.name = "subject";
  s.fiber_count = 20;
  s.vertices_per_fiber = 100;
  s.noise_std = 0.02;
  s.seed = seed;
  ChannelGenerator fa{"FA", 0.5, std::nullopt, 0.02, 0.0};
  if (delta != 0.0) fa.lesion = Lesion{0.5, 0.3, delta};
  s.channels = {fa};
  return s;
}

std::vector<BundleProfile> profiles_of(const std::vector<SyntheticSpec>& specs,
                                       const std::string& channel, const PipelineConfig& c) {
  std::vector<BundleProfile> out(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) {
    out[i] = compute_profile(generate_bundle(specs[i]).bundle, channel, c);
  });
  return out;
}

struct Localization {
  double coverage, false_positive;
};

// Lesion interval: the raised cosine's half-maximum band |s - 0.5| <= w/4.
// Off-lesion: outside its support, |s - 0.5| > w/2.
Localization localize(std::uint64_t seed, double delta, const PipelineConfig& c) {
  std::vector<SyntheticSpec> a, b;
  for (std::uint64_t k = 0; k < 13; ++k) a.push_back(cohort_member(10000 * seed + k, delta));
  for (std::uint64_t k = 0; k < 17; ++k) b.push_back(cohort_member(10000 * seed + 100 + k, 0.0));
  const PointwiseStats st = compare_groups(profiles_of(a, "FA", c), profiles_of(b, "FA", c), c);
  int in = 0, hit = 0, off = 0, false_hit = 0;
  for (std::size_t m = 0; m < st.size(); ++m) {
    const double r = std::abs(st.arc_positions[m] - 0.5);
    if (r <= 0.075) {
      ++in;
      hit += st.significant[m];
    } else if (r > 0.15) {
      ++off;
      false_hit += st.significant[m];
    }
  }
  return {static_cast<double>(hit) / in, static_cast<double>(false_hit) / off};
}

Outcome lesion_localization() {
  Outcome o;
  constexpr double kNoise = 0.02, kDelta = -5.0 * kNoise;
  // alignment stiffness: 8 x the lesion contrast against the pooled
  // reference, which sits 13/30 of the way toward the lesioned group
  PipelineConfig c;
  c.align.lambda = 8.0 * std::abs(kDelta) * 17.0 / 30.0;
  std::vector<double> cov, fp;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Localization l = localize(seed, kDelta, c);
    cov.push_back(l.coverage);
    fp.push_back(l.false_positive);
  }
  o.require(median(cov) >= 0.8, "median lesion coverage " + fmt("%.3f", median(cov)) + " >= 0.8");
  o.require(median(fp) <= 0.1, "median off-lesion rate " + fmt("%.3f", median(fp)) + " <= 0.1");
  o.note("lambda = " + fmt("%.4f", *c.align.lambda) + " over 20 seeds, q = 0.05");

  std::vector<double> dcov, dfp;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Localization l = localize(seed, kDelta, PipelineConfig{});
    dcov.push_back(l.coverage);
    dfp.push_back(l.false_positive);
  }
  o.note("default lambda (0.1 x mean dissimilarity), 5 seeds: coverage " + fmt("%.3f", median(dcov)) +
         ", off-lesion " + fmt("%.3f", median(dfp)));
  return o;
}

// ------------------------------------------------------------------ 7

SyntheticSpec fan_member(std::uint64_t seed, bool lesion) {
  SyntheticSpec s;
  s.name = "fan";
  s.fiber_count = 40;
  s.vertices_per_fiber = 200;
  s.noise_std = 0.02;
  s.fan_angle_deg = 10.0;
  if (lesion) s.fan_lesion = Lesion{0.5, 0.3, 30.0};
  s.seed = seed;
  s.channels = {{"FA", 0.5, std::nullopt, 0.005, 0.0}};
  return s;
}

double max_abs_z(const AnomalyMap& z) {
  double best = 0.0;
  for (std::size_t m = 0; m < z.z.size(); ++m)
    if (z.defined[m]) best = std::max(best, std::abs(z.z[m]));
  return best;
}

double sensitivity_ratio(std::uint64_t seed, const PipelineConfig& c) {
  std::vector<SyntheticSpec> nc;
  for (std::uint64_t k = 0; k < 17; ++k) nc.push_back(fan_member(1000 * seed + k, false));
  const FiberBundle subject = generate_bundle(fan_member(1000 * seed + 500, true)).bundle;
  double z[2];
  const char* channels[2] = {"FA", "plain:FA"};
  for (int k = 0; k < 2; ++k) {
    const GroupAtlas atlas = cohort_atlas(profiles_of(nc, channels[k], c), c);
    z[k] = max_abs_z(subject_zscore(compute_profile(subject, channels[k], c).profile, atlas, c));
  }
  return z[0] / z[1];
}

Outcome sensitivity_ordering() {
  Outcome o;
  const GroundTruth truth = generate_bundle(fan_member(0, true)).truth;
  const double contrast = 0.5 * (truth.ffd(0.1) - truth.ffd(0.5));
  PipelineConfig c;
  c.align.lambda = 8.0 * contrast;
  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) ratios.push_back(sensitivity_ratio(seed, c));
  o.require(median(ratios) >= 2.0, "median max|z| ratio FFDD / plain FA " + fmt("%.2f", median(ratios)) + " >= 2");
  o.note("fan 10 deg + 30 deg bump, FFDD contrast " + fmt("%.4f", contrast) + ", lambda " +
         fmt("%.4f", *c.align.lambda) + ", 10 seeds, min ratio " +
         fmt("%.2f", *std::min_element(ratios.begin(), ratios.end())));
  std::vector<double> dr;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) dr.push_back(sensitivity_ratio(seed, PipelineConfig{}));
  o.note("default lambda, 3 seeds: median ratio " + fmt("%.2f", median(dr)));
  return o;
}

// ------------------------------------------------------------------ 8

Outcome statistics_oracles() {
  Outcome o;
  struct BhCase {
    std::vector<double> p;
    std::vector<char> significant;
    std::vector<double> q;
  };
  const std::vector<BhCase> cases = {
      {{0, 0, 0}, {1, 1, 1}, {0, 0, 0}},
      {{0.01, 0.02, 0.03, 0.04, 0.05}, {1, 1, 1, 1, 1}, {0.05, 0.05, 0.05, 0.05, 0.05}},
      {{0.01, 0.5, 0.6, 0.7, 0.8}, {1, 0, 0, 0, 0}, {0.05, 0.8, 0.8, 0.8, 0.8}},
      {{0.04, 0.001, 0.03, 0.2, 0.012}, {1, 1, 1, 0, 1}, {0.05, 0.005, 0.05, 0.2, 0.03}},
      {{0.011, 0.025, 0.028, 0.9}, {1, 1, 1, 0}, {0.0373333333333333, 0.0373333333333333, 0.0373333333333333, 0.9}},
  };
  bool bh = true;
  for (const auto& k : cases) {
    const FdrResult r = fdr_correct(k.p, 0.05);
    bh = bh && r.significant == k.significant;
    for (std::size_t i = 0; i < k.q.size(); ++i)
      bh = bh && std::abs(r.q_values[i] - k.q[i]) <= 1e-15 + 1e-13 * k.q[i];
  }
  o.require(bh, "BH step-up matches " + std::to_string(cases.size()) + " hand-solved fixtures");

  double worst = 0.0;
  for (const auto& f : test::kTTestFixtures) {
    std::vector<TractProfile> a, b;
    for (double v : f.a) a.push_back(test::make_profile({v}));
    for (double v : f.b) b.push_back(test::make_profile({v}));
    worst = std::max(worst, std::abs(pointwise_ttest(a, b).p[0] - f.pooled_p));
    worst = std::max(worst, std::abs(pointwise_ttest(a, b, TTestKind::kWelch).p[0] - f.welch_p));
  }
  o.require(test::kTTestFixtures.size() == 10 && worst <= 1e-9,
            "t-test p on " + std::to_string(test::kTTestFixtures.size()) +
                " datasets, worst |p - reference| " + fmt("%.1e", worst));
  return o;
}

// ------------------------------------------------------------------ 9

int run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + FFDD_CLI_PATH + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

double profile_gap(const TractProfile& a, const TractProfile& b) {
  if (a.size() != b.size() || a.channel != b.channel) return INFINITY;
  double g = max_gap(a.arc_positions, b.arc_positions);
  for (std::size_t m = 0; m < a.size(); ++m) {
    g = std::max(g, std::abs(a.entries[m].magnitude - b.entries[m].magnitude));
    g = std::max(g, norm(a.entries[m].direction - b.entries[m].direction));
  }
  return g;
}

Outcome determinism_and_round_trip() {
  Outcome o;
  const fs::path work = fs::path(FFDD_ACCEPTANCE_WORK);
  fs::remove_all(work);
  for (const char* d : {"a", "b", "out"}) fs::create_directories(work / d);
  const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  std::vector<std::string> setup;
  for (int k = 0; k < 3; ++k) {
    setup.push_back("synth " + q(fs::path(FFDD_TEST_DATA) / "lesion.spec.json") + " " +
                    q(work / "a" / ("a" + std::to_string(k) + ".bundle")) + " --seed " + std::to_string(20 + k));
    setup.push_back("synth " + q(fs::path(FFDD_TEST_DATA) / "parallel.spec.json") + " " +
                    q(work / "b" / ("b" + std::to_string(k) + ".bundle")) + " --seed " + std::to_string(30 + k));
  }
  bool setup_ok = true;
  for (const auto& c : setup) setup_ok = setup_ok && run_cli(c) == 0;
  const std::string out = " --out " + q(work / "out");
  const std::string a0 = q(work / "a" / "a0.bundle"), b0 = q(work / "b" / "b0.bundle");
  const std::vector<std::string> commands = {
      "synth " + q(fs::path(FFDD_TEST_DATA) / "lesion.spec.json") + " --seed 9" + out,
      "profile " + a0 + out,
      "profile " + a0 + " --channel FFD --format json" + out,
      "compare " + a0 + " " + b0 + out,
      "atlas " + q(work / "a") + out,
      "groupstats " + q(work / "a") + " " + q(work / "b") + out,
      "zscore " + b0 + " " + q(work / "out" / "a.FA.atlas.json") + out,
  };
  auto run_all = [&] {
    bool ok = true;
    for (const auto& c : commands) ok = run_cli(c) == 0 && ok;
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& e : fs::directory_iterator(work / "out"))
      files.emplace_back(e.path().filename().string(), slurp(e.path()));
    std::sort(files.begin(), files.end());
    return std::make_pair(ok, files);
  };
  const auto first = run_all();
  const auto second = run_all();
  o.require(setup_ok && first.first && second.first && first.second == second.second,
            std::to_string(commands.size()) + " commands, " + std::to_string(first.second.size()) +
                " outputs byte-identical across reruns");

  SyntheticSpec spec = cohort_member(77, -0.1);
  spec.channels.push_back({"MD", 7.5e-4, std::nullopt, 2e-5, 1e-6});
  const FiberBundle bundle = generate_bundle(spec).bundle;
  const std::string text = format_bundle(bundle);
  const FiberBundle back = parse_bundle(text);
  double bundle_gap = back.fibers.size() == bundle.fibers.size() ? 0.0 : INFINITY;
  for (std::size_t f = 0; f < bundle.fibers.size() && std::isfinite(bundle_gap); ++f) {
    for (std::size_t v = 0; v < bundle.fibers[f].vertices.size(); ++v)
      bundle_gap = std::max(bundle_gap, norm(bundle.fibers[f].vertices[v] - back.fibers[f].vertices[v]));
    for (std::size_t c = 0; c < bundle.channels.size(); ++c)
      bundle_gap = std::max(bundle_gap, max_gap(bundle.fibers[f].scalars[c], back.fibers[f].scalars[c]));
  }
  o.require(bundle_gap <= 1e-12 && format_bundle(back) == text, "bundle round-trip gap " + fmt("%.1g", bundle_gap));

  const PipelineConfig c;
  std::vector<SyntheticSpec> cohort;
  for (std::uint64_t k = 0; k < 5; ++k) cohort.push_back(cohort_member(80 + k, 0.0));
  const auto profiles = profiles_of(cohort, "FA", c);
  const GroupAtlas atlas = cohort_atlas(profiles, c);
  double pg = 0.0, ag = 0.0;
  for (Format f : {Format::kCsv, Format::kJson}) {
    pg = std::max(pg, profile_gap(profiles[0].profile, parse_profile(format_profile(profiles[0].profile, f), f)));
    const GroupAtlas a2 = parse_atlas(format_atlas(atlas, f), f);
    ag = std::max({ag, max_gap(atlas.mean, a2.mean), max_gap(atlas.std, a2.std),
                   max_gap(atlas.arc_positions, a2.arc_positions)});
    if (f == Format::kJson) {
      for (std::size_t m = 0; m < atlas.size(); ++m) {
        ag = std::max(ag, std::abs(atlas.reference_profile[m].magnitude - a2.reference_profile[m].magnitude));
        ag = std::max(ag, norm(atlas.reference_fiber[m] - a2.reference_fiber[m]));
      }
    }
  }
  o.require(pg <= 1e-12, "profile CSV/JSON round-trip gap " + fmt("%.1g", pg));
  o.require(ag <= 1e-12, "atlas CSV/JSON round-trip gap " + fmt("%.1g", ag));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"eikonal accuracy", eikonal_accuracy},
      {"flux identities", flux_identities},
      {"optimal-plane correctness", optimal_plane},
      {"alignment recovery", alignment_recovery},
      {"mean-fiber fidelity", mean_fiber_fidelity},
      {"lesion localization", lesion_localization},
      {"sensitivity ordering", sensitivity_ordering},
      {"statistics oracles", statistics_oracles},
      {"determinism and round-trip", determinism_and_round_trip},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) o.require(false, "ran " + fmt("%.1f", secs) + " s, limit 60 s");
    std::printf("%s %zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.summary.c_str(), secs);
    for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
