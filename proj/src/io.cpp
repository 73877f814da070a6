#include "ffdd/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ffdd/error.hpp"

namespace ffdd {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(ErrorCode::kParse, msg);
}

/// Cursor over '\n'-separated lines that remembers where each line started.
class LineCursor {
 public:
  explicit LineCursor(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    start_ = pos_;
    ++number_;
    const std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) {
      line = text_.substr(pos_);
      pos_ = text_.size();
    } else {
      line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return true;
  }

  std::string where() const {
    return "line " + std::to_string(number_) + " (offset " + std::to_string(start_) + ")";
  }
  std::string at_end() const {
    return "unexpected end of file at offset " + std::to_string(text_.size()) +
           " after line " + std::to_string(number_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t start_ = 0;
  std::size_t number_ = 0;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = line.find(sep, start);
    out.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_number(std::string_view token, double& out) {
  if (token == "null") {
    out = kNaN;
    return true;
  }
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_count(std::string_view token, std::size_t& out) {
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string_view keyword_value(std::string_view line, std::string_view key,
                               const LineCursor& cursor) {
  if (!line.starts_with(key) ||
      (line.size() > key.size() && line[key.size()] != ' '))
    parse_fail(cursor.where() + ": expected '" + std::string(key) + "'");
  line.remove_prefix(std::min(line.size(), key.size() + 1));
  return line;
}

std::string csv_number(double v) { return std::isnan(v) ? "null" : format_double(v); }

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  if (j.is_null()) return kNaN;
  if (!j.is_number()) parse_fail("expected a number, got " + j.dump());
  return j.get<double>();
}

std::vector<double> numbers_from(const json& j) {
  if (!j.is_array()) parse_fail("expected an array, got " + j.dump().substr(0, 40));
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number_from(v));
  return out;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) parse_fail("expected a 3-vector, got " + j.dump());
  return {number_from(j[0]), number_from(j[1]), number_from(j[2])};
}

json metadata_json(std::string_view metadata) {
  if (metadata.empty()) return json::object();
  try {
    return json::parse(metadata);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("metadata is not JSON: ") + e.what());
  }
}

json header(const char* kind, std::string_view metadata) {
  json j;
  j["format"] = kind;
  j["version"] = kJsonSchemaVersion;
  const json meta = metadata_json(metadata);
  if (!meta.empty()) j["config"] = meta;
  return j;
}

json parse_document(std::string_view text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", std::string()) != kind)
    parse_fail(std::string("not a ") + kind + " document");
  if (j.value("version", 0) != kJsonSchemaVersion)
    throw Error(ErrorCode::kVersionMismatch,
                std::string(kind) + " schema version " + j["version"].dump() +
                    ", expected " + std::to_string(kJsonSchemaVersion));
  return j;
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

/// Rows of a CSV document after checking its header line.
std::vector<std::vector<std::string_view>> csv_rows(std::string_view text,
                                                    std::string_view expected_header) {
  LineCursor cursor(text);
  std::string_view line;
  if (!cursor.next(line) || line != expected_header)
    parse_fail("CSV header must be '" + std::string(expected_header) + "'");
  const std::size_t columns = split(expected_header, ',').size();
  std::vector<std::vector<std::string_view>> rows;
  while (cursor.next(line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != columns)
      throw Error(ErrorCode::kCountMismatch,
                  cursor.where() + ": expected " + std::to_string(columns) +
                      " columns, found " + std::to_string(cells.size()));
    rows.push_back(std::move(cells));
  }
  return rows;
}

double cell_number(std::string_view cell) {
  double v;
  if (!parse_number(cell, v)) parse_fail("bad number '" + std::string(cell) + "'");
  return v;
}

std::size_t cell_count(std::string_view cell) {
  std::size_t v;
  if (!parse_count(cell, v)) parse_fail("bad integer '" + std::string(cell) + "'");
  return v;
}

void check_index(std::size_t index, std::size_t expected) {
  if (index != expected)
    parse_fail("row index " + std::to_string(index) + " out of sequence, expected " +
               std::to_string(expected));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

constexpr std::string_view kProfileHeader =
    "index,arc_fraction,magnitude,dir_x,dir_y,dir_z,channel";
constexpr std::string_view kAtlasHeader =
    "index,arc_fraction,mean,std,ref_magnitude,ref_dir_x,ref_dir_y,ref_dir_z,"
    "ref_x,ref_y,ref_z,channel,cohort_size";
constexpr std::string_view kStatsHeader = "index,arc_fraction,t,p,q,significant";
constexpr std::string_view kAnomalyHeader = "index,arc_fraction,z";
constexpr std::string_view kComparisonHeader =
    "index,tau,s1,s2,magnitude_a,magnitude_b,d";

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw Error(ErrorCode::kInvalidArgument, "unknown format '" + std::string(name) + "'");
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------- bundles

FiberBundle parse_bundle(std::string_view text) {
  LineCursor cursor(text);
  std::string_view line;
  auto need = [&]() {
    if (!cursor.next(line)) parse_fail(cursor.at_end());
  };

  need();
  const std::string_view version = keyword_value(line, "version", cursor);
  std::size_t v = 0;
  if (!parse_count(version, v)) parse_fail(cursor.where() + ": bad version '" + std::string(version) + "'");
  if (v != static_cast<std::size_t>(kBundleFormatVersion))
    throw Error(ErrorCode::kVersionMismatch,
                "bundle format version " + std::to_string(v) + ", expected " +
                    std::to_string(kBundleFormatVersion));

  FiberBundle bundle;
  need();
  bundle.name = std::string(keyword_value(line, "name", cursor));
  need();
  for (auto token : split_ws(keyword_value(line, "channels", cursor)))
    bundle.channels.emplace_back(token);
  need();
  std::size_t fibers = 0;
  if (!parse_count(keyword_value(line, "fibers", cursor), fibers))
    parse_fail(cursor.where() + ": bad fiber count");

  const std::size_t columns = 3 + bundle.channels.size();
  bundle.fibers.resize(fibers);
  for (std::size_t f = 0; f < fibers; ++f) {
    need();
    std::size_t vertices = 0;
    if (!parse_count(line, vertices))
      parse_fail(cursor.where() + ": expected vertex count of fiber " + std::to_string(f));
    auto& fiber = bundle.fibers[f];
    fiber.vertices.resize(vertices);
    fiber.scalars.assign(bundle.channels.size(), std::vector<double>(vertices));
    for (std::size_t k = 0; k < vertices; ++k) {
      need();
      const auto tokens = split_ws(line);
      if (tokens.size() != columns)
        throw Error(ErrorCode::kCountMismatch,
                    cursor.where() + ": fiber " + std::to_string(f) + " vertex " +
                        std::to_string(k) + " has " + std::to_string(tokens.size()) +
                        " fields, expected " + std::to_string(columns));
      double values[3];
      for (int a = 0; a < 3; ++a)
        if (!parse_number(tokens[a], values[a]))
          parse_fail(cursor.where() + ": bad number '" + std::string(tokens[a]) + "'");
      fiber.vertices[k] = {values[0], values[1], values[2]};
      for (std::size_t c = 0; c < bundle.channels.size(); ++c)
        if (!parse_number(tokens[3 + c], fiber.scalars[c][k]))
          parse_fail(cursor.where() + ": bad number '" + std::string(tokens[3 + c]) + "'");
    }
  }
  while (cursor.next(line)) {
    if (!split_ws(line).empty())
      throw Error(ErrorCode::kCountMismatch,
                  cursor.where() + ": content after the declared " +
                      std::to_string(fibers) + " fibers");
  }
  validate(bundle);
  return bundle;
}

std::string format_bundle(const FiberBundle& bundle) {
  std::string out;
  out += "version " + std::to_string(kBundleFormatVersion) + "\n";
  out += "name " + bundle.name + "\n";
  out += "channels";
  for (const auto& c : bundle.channels) out += " " + c;
  out += "\n";
  out += "fibers " + std::to_string(bundle.fibers.size()) + "\n";
  for (const auto& fiber : bundle.fibers) {
    out += std::to_string(fiber.vertices.size()) + "\n";
    for (std::size_t k = 0; k < fiber.vertices.size(); ++k) {
      const Vec3& p = fiber.vertices[k];
      out += format_double(p.x) + " " + format_double(p.y) + " " + format_double(p.z);
      for (const auto& channel : fiber.scalars) out += " " + format_double(channel[k]);
      out += "\n";
    }
  }
  return out;
}

FiberBundle load_bundle(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_bundle(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_bundle(const FiberBundle& bundle, const std::filesystem::path& path) {
  validate(bundle);
  write_text(path, format_bundle(bundle));
}

// --------------------------------------------------------------- profiles

std::string format_profile(const TractProfile& profile, Format format,
                           std::string_view metadata) {
  if (format == Format::kCsv) {
    std::string out(kProfileHeader);
    out += "\n";
    for (std::size_t m = 0; m < profile.size(); ++m) {
      const auto& e = profile.entries[m];
      out += std::to_string(m) + "," + csv_number(profile.arc_positions[m]) + "," +
             csv_number(e.magnitude) + "," + csv_number(e.direction.x) + "," +
             csv_number(e.direction.y) + "," + csv_number(e.direction.z) + "," +
             profile.channel + "\n";
    }
    return out;
  }
  json j = header("ffdd-profile", metadata);
  j["bundle_name"] = profile.bundle_name;
  j["channel"] = profile.channel;
  j["M"] = profile.size();
  j["arc_length"] = json_number(profile.arc_length);
  json mags = json::array(), dirs = json::array();
  for (const auto& e : profile.entries) {
    mags.push_back(json_number(e.magnitude));
    dirs.push_back(vec_json(e.direction));
  }
  j["arc_positions"] = profile.arc_positions;
  j["magnitude"] = mags;
  j["direction"] = dirs;
  j["filled"] = profile.filled;
  j["unconverged"] = profile.unconverged;
  return dump(j);
}

TractProfile parse_profile(std::string_view text, Format format) {
  TractProfile profile;
  if (format == Format::kCsv) {
    const auto rows = csv_rows(text, kProfileHeader);
    for (std::size_t m = 0; m < rows.size(); ++m) {
      const auto& r = rows[m];
      check_index(cell_count(r[0]), m);
      if (m == 0) profile.channel = std::string(r[6]);
      else if (profile.channel != r[6]) parse_fail("mixed channels in profile CSV");
      profile.arc_positions.push_back(cell_number(r[1]));
      profile.entries.push_back(
          {cell_number(r[2]), {cell_number(r[3]), cell_number(r[4]), cell_number(r[5])},
           profile.channel});
    }
    return profile;
  }
  const json j = parse_document(text, "ffdd-profile");
  profile.bundle_name = field(j, "bundle_name").get<std::string>();
  profile.channel = field(j, "channel").get<std::string>();
  profile.arc_length = number_from(field(j, "arc_length"));
  profile.arc_positions = numbers_from(field(j, "arc_positions"));
  const auto mags = numbers_from(field(j, "magnitude"));
  const auto& dirs = field(j, "direction");
  const std::size_t count = field(j, "M").get<std::size_t>();
  if (mags.size() != count || dirs.size() != count || profile.arc_positions.size() != count)
    throw Error(ErrorCode::kCountMismatch, "profile arrays disagree with M");
  for (std::size_t m = 0; m < count; ++m)
    profile.entries.push_back({mags[m], vec_from(dirs[m]), profile.channel});
  if (j.contains("filled")) profile.filled = j["filled"].get<std::vector<std::size_t>>();
  if (j.contains("unconverged"))
    profile.unconverged = j["unconverged"].get<std::vector<std::size_t>>();
  return profile;
}

// ------------------------------------------------------------------ atlas

std::string format_atlas(const GroupAtlas& atlas, Format format,
                         std::string_view metadata) {
  if (format == Format::kCsv) {
    std::string out(kAtlasHeader);
    out += "\n";
    for (std::size_t m = 0; m < atlas.size(); ++m) {
      const auto& r = atlas.reference_profile[m];
      const auto& c = atlas.reference_fiber[m];
      out += std::to_string(m) + "," + csv_number(atlas.arc_positions[m]) + "," +
             csv_number(atlas.mean[m]) + "," + csv_number(atlas.std[m]) + "," +
             csv_number(r.magnitude) + "," + csv_number(r.direction.x) + "," +
             csv_number(r.direction.y) + "," + csv_number(r.direction.z) + "," +
             csv_number(c.x) + "," + csv_number(c.y) + "," + csv_number(c.z) + "," +
             atlas.channel + "," + std::to_string(atlas.cohort_size) + "\n";
    }
    return out;
  }
  json j = header("ffdd-atlas", metadata);
  j["channel"] = atlas.channel;
  j["M"] = atlas.size();
  j["cohort_size"] = atlas.cohort_size;
  j["arc_positions"] = atlas.arc_positions;
  json mean = json::array(), std_dev = json::array(), ref = json::array(), fiber = json::array();
  for (std::size_t m = 0; m < atlas.size(); ++m) {
    mean.push_back(json_number(atlas.mean[m]));
    std_dev.push_back(json_number(atlas.std[m]));
    ref.push_back({{"magnitude", json_number(atlas.reference_profile[m].magnitude)},
                   {"direction", vec_json(atlas.reference_profile[m].direction)}});
    fiber.push_back(vec_json(atlas.reference_fiber[m]));
  }
  j["mean"] = mean;
  j["std"] = std_dev;
  j["reference_profile"] = ref;
  j["reference_fiber"] = fiber;
  return dump(j);
}

GroupAtlas parse_atlas(std::string_view text, Format format) {
  GroupAtlas atlas;
  if (format == Format::kCsv) {
    const auto rows = csv_rows(text, kAtlasHeader);
    for (std::size_t m = 0; m < rows.size(); ++m) {
      const auto& r = rows[m];
      check_index(cell_count(r[0]), m);
      if (m == 0) {
        atlas.channel = std::string(r[11]);
        atlas.cohort_size = cell_count(r[12]);
      }
      atlas.arc_positions.push_back(cell_number(r[1]));
      atlas.mean.push_back(cell_number(r[2]));
      atlas.std.push_back(cell_number(r[3]));
      atlas.reference_profile.push_back(
          {cell_number(r[4]), {cell_number(r[5]), cell_number(r[6]), cell_number(r[7])},
           atlas.channel});
      atlas.reference_fiber.push_back({cell_number(r[8]), cell_number(r[9]), cell_number(r[10])});
    }
    return atlas;
  }
  const json j = parse_document(text, "ffdd-atlas");
  atlas.channel = field(j, "channel").get<std::string>();
  atlas.cohort_size = field(j, "cohort_size").get<std::size_t>();
  atlas.arc_positions = numbers_from(field(j, "arc_positions"));
  atlas.mean = numbers_from(field(j, "mean"));
  atlas.std = numbers_from(field(j, "std"));
  for (const auto& r : field(j, "reference_profile"))
    atlas.reference_profile.push_back(
        {number_from(field(r, "magnitude")), vec_from(field(r, "direction")), atlas.channel});
  for (const auto& c : field(j, "reference_fiber")) atlas.reference_fiber.push_back(vec_from(c));
  const std::size_t count = field(j, "M").get<std::size_t>();
  if (atlas.mean.size() != count || atlas.std.size() != count ||
      atlas.arc_positions.size() != count || atlas.reference_profile.size() != count ||
      atlas.reference_fiber.size() != count)
    throw Error(ErrorCode::kCountMismatch, "atlas arrays disagree with M");
  return atlas;
}

// ------------------------------------------------------------------ stats

std::string format_stats(const PointwiseStats& stats, Format format,
                         std::string_view metadata) {
  if (format == Format::kCsv) {
    std::string out(kStatsHeader);
    out += "\n";
    for (std::size_t m = 0; m < stats.size(); ++m) {
      out += std::to_string(m) + "," + csv_number(stats.arc_positions[m]) + "," +
             csv_number(stats.t[m]) + "," + csv_number(stats.p[m]) + "," +
             csv_number(m < stats.q.size() ? stats.q[m] : kNaN) + "," +
             (m < stats.significant.size() && stats.significant[m] ? "1" : "0") + "\n";
    }
    return out;
  }
  json j = header("ffdd-stats", metadata);
  j["M"] = stats.size();
  j["n_a"] = stats.n_a;
  j["n_b"] = stats.n_b;
  j["q_level"] = stats.q_level;
  j["arc_positions"] = stats.arc_positions;
  json t = json::array(), p = json::array(), q = json::array(), sig = json::array(),
       degenerate = json::array();
  for (std::size_t m = 0; m < stats.size(); ++m) {
    t.push_back(json_number(stats.t[m]));
    p.push_back(json_number(stats.p[m]));
    q.push_back(json_number(m < stats.q.size() ? stats.q[m] : kNaN));
    sig.push_back(m < stats.significant.size() && stats.significant[m] != 0);
    degenerate.push_back(m < stats.degenerate.size() && stats.degenerate[m] != 0);
  }
  j["t"] = t;
  j["p"] = p;
  j["q"] = q;
  j["significant"] = sig;
  j["degenerate"] = degenerate;
  return dump(j);
}

PointwiseStats parse_stats(std::string_view text, Format format) {
  PointwiseStats stats;
  if (format == Format::kCsv) {
    const auto rows = csv_rows(text, kStatsHeader);
    for (std::size_t m = 0; m < rows.size(); ++m) {
      const auto& r = rows[m];
      check_index(cell_count(r[0]), m);
      stats.arc_positions.push_back(cell_number(r[1]));
      stats.t.push_back(cell_number(r[2]));
      stats.p.push_back(cell_number(r[3]));
      stats.q.push_back(cell_number(r[4]));
      stats.significant.push_back(cell_count(r[5]) != 0 ? 1 : 0);
      stats.degenerate.push_back(0);
    }
    return stats;
  }
  const json j = parse_document(text, "ffdd-stats");
  stats.n_a = field(j, "n_a").get<std::size_t>();
  stats.n_b = field(j, "n_b").get<std::size_t>();
  stats.q_level = number_from(field(j, "q_level"));
  stats.arc_positions = numbers_from(field(j, "arc_positions"));
  stats.t = numbers_from(field(j, "t"));
  stats.p = numbers_from(field(j, "p"));
  stats.q = numbers_from(field(j, "q"));
  for (const auto& s : field(j, "significant")) stats.significant.push_back(s.get<bool>() ? 1 : 0);
  for (const auto& s : field(j, "degenerate")) stats.degenerate.push_back(s.get<bool>() ? 1 : 0);
  const std::size_t count = field(j, "M").get<std::size_t>();
  if (stats.t.size() != count || stats.p.size() != count || stats.q.size() != count ||
      stats.significant.size() != count || stats.arc_positions.size() != count)
    throw Error(ErrorCode::kCountMismatch, "stats arrays disagree with M");
  return stats;
}

// ---------------------------------------------------------------- anomaly

std::string format_anomaly(const AnomalyMap& map, Format format,
                           std::string_view metadata) {
  if (format == Format::kCsv) {
    std::string out(kAnomalyHeader);
    out += "\n";
    for (std::size_t m = 0; m < map.z.size(); ++m)
      out += std::to_string(m) + "," + csv_number(map.arc_positions[m]) + "," +
             (map.defined[m] ? csv_number(map.z[m]) : std::string("null")) + "\n";
    return out;
  }
  json j = header("ffdd-anomaly", metadata);
  j["M"] = map.z.size();
  j["arc_positions"] = map.arc_positions;
  json z = json::array();
  for (std::size_t m = 0; m < map.z.size(); ++m)
    z.push_back(map.defined[m] ? json_number(map.z[m]) : json(nullptr));
  j["z"] = z;
  return dump(j);
}

AnomalyMap parse_anomaly(std::string_view text, Format format) {
  AnomalyMap map;
  if (format == Format::kCsv) {
    const auto rows = csv_rows(text, kAnomalyHeader);
    for (std::size_t m = 0; m < rows.size(); ++m) {
      check_index(cell_count(rows[m][0]), m);
      map.arc_positions.push_back(cell_number(rows[m][1]));
      map.z.push_back(cell_number(rows[m][2]));
    }
  } else {
    const json j = parse_document(text, "ffdd-anomaly");
    map.arc_positions = numbers_from(field(j, "arc_positions"));
    map.z = numbers_from(field(j, "z"));
    if (map.z.size() != map.arc_positions.size())
      throw Error(ErrorCode::kCountMismatch, "anomaly arrays disagree in length");
  }
  for (double z : map.z) map.defined.push_back(std::isnan(z) ? 0 : 1);
  return map;
}

// ------------------------------------------------------------- comparison

std::string format_comparison(const Comparison& comparison, Format format,
                              std::string_view metadata) {
  const auto& al = comparison.alignment;
  const std::size_t count = al.path.samples.size();
  if (format == Format::kCsv) {
    std::string out(kComparisonHeader);
    out += "\n";
    for (std::size_t m = 0; m < count; ++m) {
      const double tau = count > 1 ? static_cast<double>(m) / static_cast<double>(count - 1) : 0.0;
      out += std::to_string(m) + "," + csv_number(tau) + "," +
             csv_number(al.path.samples[m].i) + "," + csv_number(al.path.samples[m].j) + "," +
             csv_number(al.aligned_a.entries[m].magnitude) + "," +
             csv_number(al.aligned_b.entries[m].magnitude) + "," +
             csv_number(comparison.pointwise[m]) + "\n";
    }
    return out;
  }
  json j = header("ffdd-comparison", metadata);
  j["M"] = count;
  j["channel"] = al.aligned_a.channel;
  j["lambda"] = al.lambda;
  j["global_dissimilarity"] = json_number(comparison.global);
  json s1 = json::array(), s2 = json::array(), ma = json::array(), mb = json::array();
  for (std::size_t m = 0; m < count; ++m) {
    s1.push_back(al.path.samples[m].i);
    s2.push_back(al.path.samples[m].j);
    ma.push_back(json_number(al.aligned_a.entries[m].magnitude));
    mb.push_back(json_number(al.aligned_b.entries[m].magnitude));
  }
  j["s1"] = s1;
  j["s2"] = s2;
  j["magnitude_a"] = ma;
  j["magnitude_b"] = mb;
  j["d"] = comparison.pointwise;
  return dump(j);
}

// ------------------------------------------------------------ file helpers

void export_profile(const TractProfile& profile, const std::filesystem::path& path,
                    Format format, std::string_view metadata) {
  write_text(path, format_profile(profile, format, metadata));
}
void export_atlas(const GroupAtlas& atlas, const std::filesystem::path& path,
                  Format format, std::string_view metadata) {
  write_text(path, format_atlas(atlas, format, metadata));
}
void export_stats(const PointwiseStats& stats, const std::filesystem::path& path,
                  Format format, std::string_view metadata) {
  write_text(path, format_stats(stats, format, metadata));
}
void export_anomaly(const AnomalyMap& map, const std::filesystem::path& path,
                    Format format, std::string_view metadata) {
  write_text(path, format_anomaly(map, format, metadata));
}

TractProfile import_profile(const std::filesystem::path& path, Format format) {
  return parse_profile(read_text(path), format);
}
GroupAtlas import_atlas(const std::filesystem::path& path, Format format) {
  return parse_atlas(read_text(path), format);
}
PointwiseStats import_stats(const std::filesystem::path& path, Format format) {
  return parse_stats(read_text(path), format);
}
AnomalyMap import_anomaly(const std::filesystem::path& path, Format format) {
  return parse_anomaly(read_text(path), format);
}

}  // namespace ffdd
