// ffdd: command-line front end over the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ffdd/ffdd.h"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr const char* kOutputDirEnv = "FFDD_OUTPUT_DIR";
constexpr const char* kBundleExtension = ".bundle";

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void fail_input(const std::string& message) { throw Failure{kExitInput, message}; }

void check(ffdd_status status, const std::string& context) {
  if (status == FFDD_OK) return;
  std::string message = ffdd_last_error();
  if (!context.empty()) message = context + ": " + message;
  throw Failure{ffdd_status_is_numerical(status) ? kExitNumerical : kExitInput, message};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using BundlePtr = std::unique_ptr<ffdd_bundle, Deleter<ffdd_bundle, ffdd_bundle_free>>;
using ProfilePtr = std::unique_ptr<ffdd_profile, Deleter<ffdd_profile, ffdd_profile_free>>;
using ComparisonPtr =
    std::unique_ptr<ffdd_comparison, Deleter<ffdd_comparison, ffdd_comparison_free>>;
using AtlasPtr = std::unique_ptr<ffdd_atlas, Deleter<ffdd_atlas, ffdd_atlas_free>>;
using StatsPtr = std::unique_ptr<ffdd_stats, Deleter<ffdd_stats, ffdd_stats_free>>;
using AnomalyPtr = std::unique_ptr<ffdd_anomaly, Deleter<ffdd_anomaly, ffdd_anomaly_free>>;

std::string take_string(char* text) {
  std::string out = text != nullptr ? text : "";
  ffdd_string_free(text);
  return out;
}

// Options shared by every subcommand.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string channel = "FA";
  bool channel_given = false;
  ffdd_config config{};
  std::string lambda = "auto";
  std::string radius = "auto";
  std::string empty = "interpolate";
  std::string ttest = "pooled";
  std::string format;  // empty: the command's natural format
  std::string out;
  std::int64_t seed = -1;
  std::size_t oracle_samples = 101;
  bool plots = true;
  unsigned threads = 0;
};

double parse_positive(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0.0) || !std::isfinite(v))
    fail_input(std::string(what) + " must be a positive number, got '" + text + "'");
  return v;
}

void resolve(RunConfig& run) {
  ffdd_config& c = run.config;
  if (run.lambda == "auto")
    c.lambda = 0.0;
  else
    c.lambda = parse_positive(run.lambda, "--lambda");
  if (run.radius == "auto") {
    c.radius_policy = FFDD_RADIUS_AUTO;
  } else if (run.radius == "unbounded") {
    c.radius_policy = FFDD_RADIUS_UNBOUNDED;
  } else {
    c.radius_policy = FFDD_RADIUS_FIXED;
    c.radius = parse_positive(run.radius, "--radius");
  }
  c.empty_policy = run.empty == "fail" ? FFDD_EMPTY_FAIL : FFDD_EMPTY_INTERPOLATE;
  c.ttest = run.ttest == "welch" ? FFDD_TTEST_WELCH : FFDD_TTEST_POOLED;
  char* echo = nullptr;
  check(ffdd_config_to_json(&c, &echo), "invalid configuration");
  ffdd_string_free(echo);
}

fs::path output_dir(const RunConfig& run) {
  fs::path dir = ".";
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') dir = env;
  if (!run.out.empty()) dir = run.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail_input("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

ffdd_format format_of(const RunConfig& run, ffdd_format natural) {
  if (run.format.empty()) return natural;
  return run.format == "json" ? FFDD_FORMAT_JSON : FFDD_FORMAT_CSV;
}

const char* extension(ffdd_format f) { return f == FFDD_FORMAT_JSON ? ".json" : ".csv"; }

// Channel names such as "plain:FA" become file-name safe.
std::string file_token(const std::string& text) {
  std::string out;
  for (char c : text) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_';
  return out;
}

json run_echo(const RunConfig& run) {
  char* text = nullptr;
  check(ffdd_config_to_json(&run.config, &text), "config echo");
  json j = json::parse(take_string(text));
  j["subcommand"] = run.subcommand;
  j["inputs"] = run.inputs;
  j["channel"] = run.channel;
  j["seed"] = run.seed;
  j["ffdd_version"] = ffdd_version();
  return j;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) fail_input("cannot write " + path.string());
}

// CSV carries no metadata block, so the run echo goes beside it.
void write_sidecar(const fs::path& data, ffdd_format format, const json& echo,
                   const json& extra = json::object()) {
  if (format != FFDD_FORMAT_CSV) return;
  json j;
  j["format"] = "ffdd-run";
  j["data"] = data.filename().string();
  j["config"] = echo;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  fs::path side = data;
  side.replace_extension(".meta.json");
  write_file(side, j.dump(2) + "\n");
  std::cout << "wrote " << side.string() << "\n";
}

void write_plot(const RunConfig& run, const fs::path& path, ffdd_cli::Plot plot,
                const json& echo) {
  if (!run.plots) return;
  plot.metadata = echo.dump();
  write_file(path, plot.render());
  std::cout << "wrote " << path.string() << "\n";
}

// Runs work(i) for i < n on a small pool; the first failure by index wins.
template <class Work>
void parallel_for(std::size_t n, unsigned threads, Work work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::optional<Failure>> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        work(i);
      } catch (const Failure& f) {
        failures[i] = f;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) throw *f;
}

BundlePtr load_bundle(const std::string& path) {
  ffdd_bundle* b = nullptr;
  check(ffdd_bundle_load(path.c_str(), &b), path);
  return BundlePtr(b);
}

// Warnings are returned rather than printed so parallel callers can keep order.
ProfilePtr profile_of(const std::string& path, const RunConfig& run, std::string& warnings) {
  BundlePtr bundle = load_bundle(path);
  ffdd_profile* p = nullptr;
  check(ffdd_profile_compute(bundle.get(), run.channel.c_str(), &run.config, &p), path);
  ProfilePtr profile(p);
  if (const std::size_t n = ffdd_profile_unconverged_count(p); n > 0)
    warnings += "warning: " + path + ": plane search did not converge at " + std::to_string(n) +
                " samples\n";
  if (const std::size_t n = ffdd_profile_filled_count(p); n > 0)
    warnings += "warning: " + path + ": " + std::to_string(n) +
                " empty cross-sections interpolated\n";
  return profile;
}

ProfilePtr profile_of(const std::string& path, const RunConfig& run) {
  std::string warnings;
  ProfilePtr profile = profile_of(path, run, warnings);
  std::cerr << warnings;
  return profile;
}

std::vector<std::string> cohort_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail_input("not a directory: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == kBundleExtension)
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) fail_input("no " + std::string(kBundleExtension) + " files in " + dir);
  return files;
}

std::vector<ProfilePtr> cohort_profiles(const std::vector<std::string>& files,
                                        const RunConfig& run) {
  std::vector<ProfilePtr> out(files.size());
  std::vector<std::string> warnings(files.size());
  parallel_for(files.size(), run.threads,
               [&](std::size_t i) { out[i] = profile_of(files[i], run, warnings[i]); });
  for (const auto& w : warnings) std::cerr << w;
  return out;
}

std::vector<const ffdd_profile*> raw(const std::vector<ProfilePtr>& v) {
  std::vector<const ffdd_profile*> out;
  for (const auto& p : v) out.push_back(p.get());
  return out;
}

std::string stem_of(const std::string& path) {
  const fs::path p(path);
  std::string s = p.stem().string();
  if (s.empty()) s = p.parent_path().filename().string();  // "dir/"
  return s.empty() ? "out" : s;
}

// ------------------------------------------------------------------ commands

int cmd_profile(RunConfig& run) {
  const std::string& input = run.inputs.at(0);
  ProfilePtr profile = profile_of(input, run);
  const fs::path dir = output_dir(run);
  const ffdd_format format = format_of(run, FFDD_FORMAT_CSV);
  const std::string base = stem_of(input) + "." + file_token(run.channel) + ".profile";
  const json echo = run_echo(run);

  const fs::path data = dir / (base + extension(format));
  check(ffdd_profile_export(profile.get(), data.string().c_str(), format, echo.dump().c_str()),
        data.string());
  std::cout << "wrote " << data.string() << "\n";
  write_sidecar(data, format, echo);

  const std::size_t n = ffdd_profile_size(profile.get());
  std::vector<double> s(n), mag(n);
  check(ffdd_profile_arrays(profile.get(), s.data(), mag.data(), nullptr, n), "profile");
  ffdd_cli::Plot plot;
  plot.title = stem_of(input) + ": " + run.channel + " tract profile";
  plot.y_label = run.channel + " flux magnitude";
  plot.series.push_back({s, mag, "#1f4e9a", run.channel});
  write_plot(run, dir / (base + ".svg"), plot, echo);
  return 0;
}

int cmd_compare(RunConfig& run) {
  std::vector<ProfilePtr> profiles = cohort_profiles(run.inputs, run);
  ffdd_comparison* raw_c = nullptr;
  check(ffdd_compare(profiles[0].get(), profiles[1].get(), &run.config, &raw_c), "compare");
  ComparisonPtr cmp(raw_c);
  const double global = ffdd_comparison_global(cmp.get());

  const fs::path dir = output_dir(run);
  const ffdd_format format = format_of(run, FFDD_FORMAT_CSV);
  const std::string base = stem_of(run.inputs[0]) + "_vs_" + stem_of(run.inputs[1]) + "." +
                           file_token(run.channel) + ".compare";
  json echo = run_echo(run);
  echo["lambda_used"] = ffdd_comparison_lambda(cmp.get());

  const fs::path data = dir / (base + extension(format));
  check(ffdd_comparison_export(cmp.get(), data.string().c_str(), format, echo.dump().c_str()),
        data.string());
  std::cout << "wrote " << data.string() << "\n";
  write_sidecar(data, format, echo, {{"global_dissimilarity", global}});

  const std::size_t n = ffdd_comparison_size(cmp.get());
  std::vector<double> ma(n), mb(n), d(n), tau(n);
  check(ffdd_comparison_arrays(cmp.get(), nullptr, nullptr, ma.data(), mb.data(), d.data(), n),
        "compare");
  for (std::size_t m = 0; m < n; ++m)
    tau[m] = n > 1 ? static_cast<double>(m) / static_cast<double>(n - 1) : 0.0;
  ffdd_cli::Plot plot;
  char title[64];
  std::snprintf(title, sizeof title, "aligned %s profiles, D = %.6g", run.channel.c_str(), global);
  plot.title = title;
  plot.x_label = "alignment path fraction";
  plot.y_label = run.channel + " flux magnitude";
  plot.series.push_back({tau, mb, "#777777", stem_of(run.inputs[1]), true});
  plot.colored.push_back({tau, ma, d, stem_of(run.inputs[0]) + " (colour: d)"});
  write_plot(run, dir / (base + ".svg"), plot, echo);

  std::printf("D = %.17g\n", global);
  return 0;
}

int cmd_atlas(RunConfig& run) {
  const std::vector<std::string> files = cohort_files(run.inputs.at(0));
  std::vector<ProfilePtr> profiles = cohort_profiles(files, run);
  const auto cohort = raw(profiles);
  ffdd_atlas* raw_a = nullptr;
  check(ffdd_atlas_build(cohort.data(), cohort.size(), &run.config, &raw_a), "atlas");
  AtlasPtr atlas(raw_a);

  const fs::path dir = output_dir(run);
  const ffdd_format format = format_of(run, FFDD_FORMAT_JSON);
  const std::string base = stem_of(run.inputs[0]) + "." + file_token(run.channel) + ".atlas";
  json echo = run_echo(run);
  echo["cohort"] = files;

  const fs::path data = dir / (base + extension(format));
  check(ffdd_atlas_export(atlas.get(), data.string().c_str(), format, echo.dump().c_str()),
        data.string());
  std::cout << "wrote " << data.string() << "\n";
  write_sidecar(data, format, echo);

  const std::size_t n = ffdd_atlas_size(atlas.get());
  std::vector<double> s(n), mean(n), sd(n), lo(n), hi(n);
  check(ffdd_atlas_arrays(atlas.get(), s.data(), mean.data(), sd.data(), n), "atlas");
  for (std::size_t m = 0; m < n; ++m) {
    lo[m] = mean[m] - sd[m];
    hi[m] = mean[m] + sd[m];
  }
  ffdd_cli::Plot plot;
  plot.title = run.channel + " atlas, " + std::to_string(files.size()) + " subjects";
  plot.y_label = run.channel + " flux magnitude";
  plot.bands.push_back({s, lo, hi, "#9db7e0", "mean +/- 1 std"});
  plot.series.push_back({s, mean, "#1f4e9a", "mean"});
  write_plot(run, dir / (base + ".svg"), plot, echo);
  return 0;
}

int cmd_groupstats(RunConfig& run) {
  const std::vector<std::string> files_a = cohort_files(run.inputs.at(0));
  const std::vector<std::string> files_b = cohort_files(run.inputs.at(1));
  std::vector<std::string> all = files_a;
  all.insert(all.end(), files_b.begin(), files_b.end());
  std::vector<ProfilePtr> profiles = cohort_profiles(all, run);
  const auto ptrs = raw(profiles);
  ffdd_stats* raw_s = nullptr;
  check(ffdd_groupstats(ptrs.data(), files_a.size(), ptrs.data() + files_a.size(), files_b.size(),
                        &run.config, &raw_s),
        "groupstats");
  StatsPtr stats(raw_s);

  const fs::path dir = output_dir(run);
  const ffdd_format format = format_of(run, FFDD_FORMAT_CSV);
  const std::string base = stem_of(run.inputs[0]) + "_vs_" + stem_of(run.inputs[1]) + "." +
                           file_token(run.channel) + ".stats";
  json echo = run_echo(run);
  echo["group_a"] = files_a;
  echo["group_b"] = files_b;

  const fs::path data = dir / (base + extension(format));
  check(ffdd_stats_export(stats.get(), data.string().c_str(), format, echo.dump().c_str()),
        data.string());
  std::cout << "wrote " << data.string() << "\n";
  write_sidecar(data, format, echo);

  const std::size_t n = ffdd_stats_size(stats.get());
  std::vector<double> s(n), t(n), p(n), q(n), lp(n), lq(n);
  std::vector<int> sig(n);
  check(ffdd_stats_arrays(stats.get(), s.data(), t.data(), p.data(), q.data(), sig.data(), n),
        "groupstats");
  ffdd_cli::Plot plot;
  std::size_t count = 0;
  for (std::size_t m = 0; m < n; ++m) {
    lp[m] = -std::log10(p[m]);
    lq[m] = -std::log10(q[m]);
    if (sig[m] != 0) {
      plot.markers.push_back(s[m]);
      ++count;
    }
  }
  plot.title = run.channel + " group comparison, " + std::to_string(count) + " significant";
  plot.y_label = "-log10 value";
  plot.series.push_back({s, lp, "#1f4e9a", "p"});
  plot.series.push_back({s, lq, "#b2182b", "q (FDR)"});
  plot.hlines.push_back(-std::log10(run.config.fdr_q));
  write_plot(run, dir / (base + ".svg"), plot, echo);
  return 0;
}

int cmd_zscore(RunConfig& run) {
  const std::string& atlas_path = run.inputs.at(1);
  const ffdd_format atlas_format =
      fs::path(atlas_path).extension() == ".csv" ? FFDD_FORMAT_CSV : FFDD_FORMAT_JSON;
  ffdd_atlas* raw_a = nullptr;
  check(ffdd_atlas_import(atlas_path.c_str(), atlas_format, &raw_a), atlas_path);
  AtlasPtr atlas(raw_a);
  if (!run.channel_given) run.channel = ffdd_atlas_channel(atlas.get());

  ProfilePtr subject = profile_of(run.inputs[0], run);
  ffdd_anomaly* raw_z = nullptr;
  check(ffdd_zscore(subject.get(), atlas.get(), &run.config, &raw_z), "zscore");
  AnomalyPtr anomaly(raw_z);

  const fs::path dir = output_dir(run);
  const ffdd_format format = format_of(run, FFDD_FORMAT_CSV);
  const std::string base = stem_of(run.inputs[0]) + "." + file_token(run.channel) + ".zscore";
  const json echo = run_echo(run);

  const fs::path data = dir / (base + extension(format));
  check(ffdd_anomaly_export(anomaly.get(), data.string().c_str(), format, echo.dump().c_str()),
        data.string());
  std::cout << "wrote " << data.string() << "\n";
  write_sidecar(data, format, echo);

  const std::size_t n = ffdd_anomaly_size(anomaly.get());
  std::vector<double> s(n), z(n);
  std::vector<int> defined(n);
  check(ffdd_anomaly_arrays(anomaly.get(), s.data(), z.data(), defined.data(), n), "zscore");
  for (std::size_t m = 0; m < n; ++m)
    if (defined[m] == 0) z[m] = std::nan("");
  ffdd_cli::Plot plot;
  plot.title = stem_of(run.inputs[0]) + ": " + run.channel + " deviation from atlas";
  plot.y_label = "z (atlas std)";
  plot.colored.push_back({s, z, z, "z"});
  plot.scale = ffdd_cli::Scale::kDiverging;
  plot.hlines = {-2.0, 0.0, 2.0};
  write_plot(run, dir / (base + ".svg"), plot, echo);
  return 0;
}

int cmd_synth(RunConfig& run) {
  const std::string& spec_path = run.inputs.at(0);
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) fail_input("cannot open " + spec_path);
  const std::string spec((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  ffdd_bundle* raw_b = nullptr;
  char* oracle = nullptr;
  check(ffdd_bundle_generate(spec.c_str(), run.seed, run.oracle_samples, &raw_b, &oracle),
        spec_path);
  BundlePtr bundle(raw_b);
  const std::string oracle_text = take_string(oracle);

  fs::path target;
  if (run.inputs.size() > 1 && !run.inputs[1].empty())
    target = run.inputs[1];
  else
    target = output_dir(run) / (file_token(ffdd_bundle_name(bundle.get())) + kBundleExtension);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  check(ffdd_bundle_save(bundle.get(), target.string().c_str()), target.string());
  std::cout << "wrote " << target.string() << "\n";
  fs::path oracle_path = target;
  oracle_path.replace_extension(".oracle.json");
  write_file(oracle_path, oracle_text);
  std::cout << "wrote " << oracle_path.string() << "\n";
  return 0;
}

// ----------------------------------------------------------------- options

void add_analysis_options(CLI::App& sub, RunConfig& run) {
  ffdd_config& c = run.config;
  sub.add_option("--channel", run.channel,
                 "channel to profile; FFD for geometry only, plain:<name> for an unweighted mean")
      ->capture_default_str()
      ->each([&run](const std::string&) { run.channel_given = true; });
  sub.add_option("-K,--degree", c.degree, "cosine series degree of the mean fiber")
      ->capture_default_str();
  sub.add_option("-M,--samples", c.samples, "profile samples along the tract")
      ->capture_default_str();
  sub.add_option("--lambda", run.lambda,
                 "alignment regularization: a positive number or auto (fraction of the mean "
                 "dissimilarity)")
      ->capture_default_str();
  sub.add_option("--lambda-fraction", c.lambda_fraction, "fraction used by --lambda auto")
      ->capture_default_str();
  sub.add_option("--epsilon", c.epsilon, "backtracking step in grid units")->capture_default_str();
  sub.add_option("--radius", run.radius, "cross-section radius: auto, unbounded or mm")
      ->capture_default_str();
  sub.add_option("--tol", c.tol, "plane search tolerance (rad)")->capture_default_str();
  sub.add_option("--max-iter", c.max_iter, "plane search iteration cap")->capture_default_str();
  sub.add_option("--empty", run.empty, "empty cross-sections: interpolate or fail")
      ->check(CLI::IsMember({"interpolate", "fail"}))
      ->capture_default_str();
  sub.add_option("-q,--fdr-q", c.fdr_q, "false discovery rate level")->capture_default_str();
  sub.add_option("--ttest", run.ttest, "pooled or welch")
      ->check(CLI::IsMember({"pooled", "welch"}))
      ->capture_default_str();
  sub.add_option("--format", run.format, "csv or json (default csv; atlas json)")
      ->check(CLI::IsMember({"csv", "json"}));
  sub.add_flag("!--no-plot", run.plots, "skip the SVG plot");
  sub.add_option("--threads", run.threads, "worker threads for per-subject work (0: all cores)")
      ->capture_default_str();
}

void add_out_option(CLI::App& sub, RunConfig& run) {
  sub.add_option("--out", run.out,
                 std::string("output directory (default: $") + kOutputDirEnv + " or .)");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig run;
  ffdd_config_default(&run.config);

  CLI::App app{"Fiber-flux diffusion density tractometry"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ffdd_version()));

  auto* profile = app.add_subcommand("profile", "tract profile of one bundle");
  profile->add_option("bundle", run.inputs, "bundle file")->required()->expected(1);
  auto* compare = app.add_subcommand("compare", "align and compare two bundles");
  compare->add_option("bundles", run.inputs, "two bundle files")->required()->expected(2);
  auto* atlas = app.add_subcommand("atlas", "atlas of a cohort directory of .bundle files");
  atlas->add_option("cohort", run.inputs, "cohort directory")->required()->expected(1);
  auto* groupstats = app.add_subcommand("groupstats", "pointwise statistics of two cohorts");
  groupstats->add_option("cohorts", run.inputs, "two cohort directories")
      ->required()
      ->expected(2);
  auto* zscore = app.add_subcommand("zscore", "deviation of a subject from an atlas");
  zscore->add_option("inputs", run.inputs, "subject bundle and atlas file")
      ->required()
      ->expected(2);
  for (CLI::App* sub : {profile, compare, atlas, groupstats, zscore}) {
    add_analysis_options(*sub, run);
    add_out_option(*sub, run);
  }
  auto* synth = app.add_subcommand("synth", "generate a synthetic bundle and its oracle");
  synth->add_option("spec", run.inputs, "JSON generator spec, then optional output path")
      ->required()
      ->expected(1, 2);
  synth->add_option("--seed", run.seed, "override the spec seed (-1 keeps it)")
      ->capture_default_str();
  synth->add_option("--oracle-samples", run.oracle_samples, "oracle grid size")
      ->capture_default_str();
  add_out_option(*synth, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    run.subcommand = app.get_subcommands().front()->get_name();
    if (run.subcommand == "synth") return cmd_synth(run);
    resolve(run);
    if (run.subcommand == "profile") return cmd_profile(run);
    if (run.subcommand == "compare") return cmd_compare(run);
    if (run.subcommand == "atlas") return cmd_atlas(run);
    if (run.subcommand == "groupstats") return cmd_groupstats(run);
    return cmd_zscore(run);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
