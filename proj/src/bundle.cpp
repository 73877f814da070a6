#include "ffdd/bundle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ffdd/error.hpp"
#include "ffdd/parallel.hpp"

namespace ffdd {
namespace {

/// Arc length of the series between u0 and u1 by 5-point Gauss-Legendre.
double arc_between(const CosineSeries& series, double u0, double u1) {
  static constexpr double kNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                       0.5384693101056831, 0.9061798459386640};
  static constexpr double kWeights[5] = {0.2369268850561891, 0.4786286704993665,
                                         0.5688888888888889, 0.4786286704993665,
                                         0.2369268850561891};
  const double half = 0.5 * (u1 - u0);
  const double mid = 0.5 * (u0 + u1);
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) sum += kWeights[k] * norm(series.derivative(mid + half * kNodes[k]));
  return sum * half;
}

constexpr double kPi = std::numbers::pi;

double axis(const Vec3& v, int a) { return a == 0 ? v.x : (a == 1 ? v.y : v.z); }

Vec3 from_axes(double x, double y, double z) { return {x, y, z}; }

/// Unit tangent at parameter u. Every cosine series has zero velocity at
/// u = 0 and u = 1, so the direction there is the limit c''(u) * sign.
Vec3 unit_tangent(const CosineSeries& series, double u) {
  const Vec3 d = series.derivative(u);
  const double speed = norm(d);
  double scale = 0.0;
  for (const auto& c : series.coefficients)
    for (std::size_t k = 1; k < c.size(); ++k) scale += std::abs(c[k]) * k;
  if (speed > 1e-12 * std::max(scale, 1.0)) return d * (1.0 / speed);

  Vec3 acc;
  for (int a = 0; a < 3; ++a) {
    double v = 0.0;
    const auto& c = series.coefficients[a];
    for (std::size_t k = 1; k < c.size(); ++k) {
      const double w = k * kPi;
      v -= c[k] * w * w * std::cos(w * u);
    }
    (a == 0 ? acc.x : (a == 1 ? acc.y : acc.z)) = v;
  }
  return normalized(u > 0.5 ? -acc : acc);
}

}  // namespace

std::optional<std::size_t> FiberBundle::channel_index(
    std::string_view channel) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] == channel) return i;
  }
  return std::nullopt;
}

void validate(const FiberBundle& bundle) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kValidation, msg);
  };
  if (bundle.fibers.empty()) fail("bundle '" + bundle.name + "' has no fibers");
  const auto fa = bundle.channel_index("FA");
  for (std::size_t f = 0; f < bundle.fibers.size(); ++f) {
    const auto& fiber = bundle.fibers[f];
    const std::string where = "fiber " + std::to_string(f);
    if (fiber.vertices.size() < 2) fail(where + " has fewer than 2 vertices");
    if (fiber.scalars.size() != bundle.channels.size())
      fail(where + " carries " + std::to_string(fiber.scalars.size()) +
           " channels, bundle declares " +
           std::to_string(bundle.channels.size()));
    for (std::size_t v = 0; v < fiber.vertices.size(); ++v) {
      const Vec3& p = fiber.vertices[v];
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        fail(where + " vertex " + std::to_string(v) + " is not finite");
      if (v > 0 && p == fiber.vertices[v - 1])
        fail(where + " vertices " + std::to_string(v - 1) + " and " +
             std::to_string(v) + " coincide (zero-length segment)");
    }
    for (std::size_t c = 0; c < fiber.scalars.size(); ++c) {
      const auto& values = fiber.scalars[c];
      if (values.size() != fiber.vertices.size())
        fail("channel " + bundle.channels[c] + " of " + where + " has " +
             std::to_string(values.size()) + " values for " +
             std::to_string(fiber.vertices.size()) + " vertices");
      for (std::size_t v = 0; v < values.size(); ++v) {
        if (!std::isfinite(values[v]))
          fail("channel " + bundle.channels[c] + " of " + where + " vertex " +
               std::to_string(v) + " is not finite");
        if (fa && *fa == c && (values[v] < 0.0 || values[v] > 1.0)) {
          std::ostringstream os;
          os << "channel FA of " << where << " vertex " << v << " is "
             << values[v] << ", outside [0, 1]";
          fail(os.str());
        }
      }
    }
  }
}

Vec3 CosineSeries::evaluate(double s) const {
  double out[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    const auto& c = coefficients[a];
    for (std::size_t k = 0; k < c.size(); ++k) out[a] += c[k] * std::cos(k * kPi * s);
  }
  return from_axes(out[0], out[1], out[2]);
}

Vec3 CosineSeries::derivative(double s) const {
  double out[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    const auto& c = coefficients[a];
    for (std::size_t k = 1; k < c.size(); ++k)
      out[a] -= c[k] * k * kPi * std::sin(k * kPi * s);
  }
  return from_axes(out[0], out[1], out[2]);
}

double MeanFiber::parameter_at(double fraction) const {
  const double target = fraction * arc_length;
  if (target <= 0.0) return table_parameter.front();
  if (target >= table_arc.back()) return table_parameter.back();
  const auto it = std::upper_bound(table_arc.begin(), table_arc.end(), target);
  const std::size_t hi = static_cast<std::size_t>(it - table_arc.begin());
  const std::size_t lo = hi - 1;
  const double span = table_arc[hi] - table_arc[lo];
  double a = table_parameter[lo];
  double b = table_parameter[hi];
  if (!(span > 0.0)) return a;
  // Safeguarded Newton on the exact in-interval arc length, started from
  // the linear lookup.
  double u = a + (target - table_arc[lo]) / span * (b - a);
  for (int iter = 0; iter < 50; ++iter) {
    const double f = table_arc[lo] + arc_between(series, table_parameter[lo], u) - target;
    if (std::fabs(f) <= 1e-14 * arc_length) break;
    if (f > 0.0) b = u;
    else a = u;
    const double speed = norm(series.derivative(u));
    double next = speed > 0.0 ? u - f / speed : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == u) break;
    u = next;
  }
  return u;
}

std::vector<double> chord_parameters(const std::vector<Vec3>& vertices) {
  std::vector<double> s(vertices.size(), 0.0);
  for (std::size_t i = 1; i < vertices.size(); ++i)
    s[i] = s[i - 1] + norm(vertices[i] - vertices[i - 1]);
  const double total = vertices.empty() ? 0.0 : s.back();
  if (!(total > 0.0))
    throw Error(ErrorCode::kDegenerateFiber, "fiber has zero chord length");
  for (double& v : s) v /= total;
  s.back() = 1.0;
  return s;
}

CosineSeries fit_cosine_series(const FiberStreamline& fiber, int degree) {
  if (degree < 1)
    throw Error(ErrorCode::kInvalidArgument, "cosine series degree must be >= 1");
  const std::vector<double> s = chord_parameters(fiber.vertices);
  const Eigen::Index n = static_cast<Eigen::Index>(s.size());
  const Eigen::Index cols = degree + 1;
  if (n < cols)
    throw Error(ErrorCode::kRankDeficient,
                "fiber has " + std::to_string(n) + " vertices, degree " +
                    std::to_string(degree) + " needs at least " +
                    std::to_string(cols));

  Eigen::MatrixXd basis(n, cols);
  Eigen::MatrixXd rhs(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k)
      basis(i, k) = std::cos(static_cast<double>(k) * kPi * s[i]);
    for (int a = 0; a < 3; ++a) rhs(i, a) = axis(fiber.vertices[i], a);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols)
    throw Error(ErrorCode::kRankDeficient,
                "cosine basis of degree " + std::to_string(degree) +
                    " is rank deficient on this fiber (rank " +
                    std::to_string(qr.rank()) + ")");
  const Eigen::MatrixXd coef = qr.solve(rhs);

  CosineSeries out;
  out.degree = degree;
  for (int a = 0; a < 3; ++a) {
    out.coefficients[a].resize(static_cast<std::size_t>(cols));
    for (Eigen::Index k = 0; k < cols; ++k) out.coefficients[a][k] = coef(k, a);
  }
  return out;
}

MeanFiber mean_fiber(const FiberBundle& bundle, int degree, int samples) {
  if (samples < 2)
    throw Error(ErrorCode::kInvalidArgument, "mean fiber needs at least 2 samples");
  if (bundle.fibers.empty())
    throw Error(ErrorCode::kInvalidArgument, "bundle has no fibers");

  std::vector<CosineSeries> fits(bundle.fibers.size());
  parallel_for(fits.size(), [&](std::size_t f) {
    try {
      fits[f] = fit_cosine_series(bundle.fibers[f], degree);
    } catch (const Error& e) {
      throw Error(e.code(), "fiber " + std::to_string(f) + ": " + e.what());
    }
  });

  MeanFiber mean;
  mean.series.degree = degree;
  for (int a = 0; a < 3; ++a) {
    auto& c = mean.series.coefficients[a];
    c.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    for (const auto& fit : fits)
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += fit.coefficients[a][k];
    for (double& v : c) v /= static_cast<double>(fits.size());
  }

  // Cumulative arc length on a dense grid of 10*M intervals.
  const std::size_t dense = 10 * static_cast<std::size_t>(samples);
  mean.table_parameter.resize(dense + 1);
  mean.table_arc.resize(dense + 1);
  mean.table_parameter[0] = 0.0;
  mean.table_arc[0] = 0.0;
  for (std::size_t i = 1; i <= dense; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(dense);
    mean.table_parameter[i] = u;
    mean.table_arc[i] =
        mean.table_arc[i - 1] + arc_between(mean.series, mean.table_parameter[i - 1], u);
  }
  mean.arc_length = mean.table_arc.back();
  if (!(mean.arc_length > 0.0))
    throw Error(ErrorCode::kDegenerateFiber, "mean fiber has zero arc length");

  mean.samples.resize(static_cast<std::size_t>(samples));
  mean.tangents.resize(static_cast<std::size_t>(samples));
  for (int m = 0; m < samples; ++m) {
    const double u = mean.parameter_at(static_cast<double>(m) / (samples - 1));
    mean.samples[m] = mean.series.evaluate(u);
    mean.tangents[m] = unit_tangent(mean.series, u);
  }
  return mean;
}

FiberBundle reorient_bundle(FiberBundle bundle) {
  if (bundle.fibers.size() < 2) return bundle;
  const auto endpoint = [](const FiberStreamline& f) {
    return f.vertices.back() - f.vertices.front();
  };
  const Vec3 reference = endpoint(bundle.fibers.front());
  for (auto& fiber : bundle.fibers) {
    if (fiber.vertices.empty()) continue;
    if (dot(endpoint(fiber), reference) < 0.0) {
      std::reverse(fiber.vertices.begin(), fiber.vertices.end());
      for (auto& channel : fiber.scalars) std::reverse(channel.begin(), channel.end());
    }
  }
  return bundle;
}

CurvePoint sample_at(const MeanFiber& mean, double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw Error(ErrorCode::kOutOfRange,
                "arc-length fraction " + std::to_string(s) + " outside [0, 1]");
  const double u = mean.parameter_at(s);
  return {mean.series.evaluate(u), unit_tangent(mean.series, u)};
}

}  // namespace ffdd
