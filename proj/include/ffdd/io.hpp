#ifndef FFDD_IO_HPP
#define FFDD_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ffdd/align.hpp"
#include "ffdd/bundle.hpp"
#include "ffdd/descriptor.hpp"
#include "ffdd/stats.hpp"

namespace ffdd {

inline constexpr int kBundleFormatVersion = 1;
inline constexpr int kJsonSchemaVersion = 1;

enum class Format { kCsv, kJson };

/// Parses "csv" or "json". Throws kInvalidArgument.
Format parse_format(std::string_view name);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Bundle text format:
//
//   version 1
//   name <name>
//   channels <c1> <c2> ...
//   fibers <N>
//   <vertex count of fiber 0>
//   x y z c1 c2 ...        (one row per vertex)
//   <vertex count of fiber 1>
//   ...
//
// Fields are separated by single spaces, lines by '\n', numbers written in
// shortest round-trip form.

/// Throws kParse (with line and byte offset), kVersionMismatch,
/// kCountMismatch or kValidation.
FiberBundle parse_bundle(std::string_view text);
std::string format_bundle(const FiberBundle& bundle);

FiberBundle load_bundle(const std::filesystem::path& path);
void save_bundle(const FiberBundle& bundle, const std::filesystem::path& path);

/// Exports write `metadata` (a JSON object in text form, may be empty) under
/// the "config" key of JSON outputs. CSV outputs hold data rows only.
std::string format_profile(const TractProfile& profile, Format format,
                           std::string_view metadata = {});
std::string format_atlas(const GroupAtlas& atlas, Format format,
                         std::string_view metadata = {});
std::string format_stats(const PointwiseStats& stats, Format format,
                         std::string_view metadata = {});
std::string format_anomaly(const AnomalyMap& map, Format format,
                           std::string_view metadata = {});

/// Aligned pair, pointwise and global dissimilarity.
struct Comparison {
  Alignment alignment;
  std::vector<double> pointwise;
  double global = 0.0;
};
std::string format_comparison(const Comparison& comparison, Format format,
                              std::string_view metadata = {});

TractProfile parse_profile(std::string_view text, Format format);
GroupAtlas parse_atlas(std::string_view text, Format format);
PointwiseStats parse_stats(std::string_view text, Format format);
AnomalyMap parse_anomaly(std::string_view text, Format format);

void export_profile(const TractProfile& profile, const std::filesystem::path& path,
                    Format format, std::string_view metadata = {});
void export_atlas(const GroupAtlas& atlas, const std::filesystem::path& path,
                  Format format, std::string_view metadata = {});
void export_stats(const PointwiseStats& stats, const std::filesystem::path& path,
                  Format format, std::string_view metadata = {});
void export_anomaly(const AnomalyMap& map, const std::filesystem::path& path,
                    Format format, std::string_view metadata = {});

TractProfile import_profile(const std::filesystem::path& path, Format format);
GroupAtlas import_atlas(const std::filesystem::path& path, Format format);
PointwiseStats import_stats(const std::filesystem::path& path, Format format);
AnomalyMap import_anomaly(const std::filesystem::path& path, Format format);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace ffdd

#endif  // FFDD_IO_HPP
