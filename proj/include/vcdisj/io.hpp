#pragma once

// Instance description files, point-set and transcript CSV, atomic file output.
//
// Instance file (one `key = value` per line, `#` starts a comment):
//   version = 1
//   geometry = interval | grid
//   n = <int>
//   d = <int>
//   m = <int>
//   seed = <int>
//   anchors = x:y x:y ...

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "vcdisj/errors.hpp"
#include "vcdisj/geometry.hpp"
#include "vcdisj/runtime.hpp"
#include "vcdisj/setsystems.hpp"

namespace vcdisj {

inline constexpr int instance_format_version = 1;

using AnyInstance = std::variant<IntervalInstance, GridInstance>;

struct InstanceFile {
  AnyInstance instance;
  std::uint64_t seed = 0;
};

inline void write_instance(std::ostream& os, const InstanceKey& key, std::uint64_t seed) {
  os << "version = " << instance_format_version << '\n'
     << "geometry = " << to_string(key.geometry) << '\n'
     << "n = " << key.n << '\n'
     << "d = " << key.d << '\n'
     << "m = " << key.m << '\n'
     << "seed = " << seed << '\n'
     << "anchors =";
  for (const auto& p : key.anchors) os << ' ' << p.x << ':' << p.y;
  os << '\n';
}

inline void write_instance(std::ostream& os, const AnyInstance& inst, std::uint64_t seed) {
  std::visit([&](const auto& i) { write_instance(os, *i.key(), seed); }, inst);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::int64_t parse_int(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && !text.empty(), "instance file: field '" + field + "' is not an integer: " + text);
  return v;
}

}  // namespace detail

inline InstanceFile read_instance(std::istream& is) {
  std::map<std::string, std::string> fields;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    detail::require(eq != std::string::npos, "instance file: line " + std::to_string(lineno) + " lacks '='");
    const auto key = detail::trim(line.substr(0, eq));
    static const std::set<std::string> known{"version", "geometry", "n", "d", "m", "seed", "anchors"};
    detail::require(known.count(key) != 0, "instance file: unknown field '" + key + "'");
    detail::require(fields.emplace(key, detail::trim(line.substr(eq + 1))).second,
                    "instance file: duplicate field '" + key + "'");
  }
  for (const char* f : {"version", "geometry", "n", "d", "m", "anchors"})
    detail::require(fields.count(f) != 0, std::string("instance file: missing field '") + f + "'");
  detail::require(detail::parse_int("version", fields["version"]) == instance_format_version,
                  "instance file: unsupported version " + fields["version"]);

  const auto n = detail::parse_int("n", fields["n"]);
  const auto d = detail::parse_int("d", fields["d"]);
  const auto m = detail::parse_int("m", fields["m"]);
  const std::uint64_t seed =
      fields.count("seed") ? static_cast<std::uint64_t>(detail::parse_int("seed", fields["seed"])) : 0;

  std::vector<Point> anchors;
  std::istringstream as(fields["anchors"]);
  std::string tok;
  while (as >> tok) {
    const auto colon = tok.find(':');
    detail::require(colon != std::string::npos, "instance file: anchor '" + tok + "' is not x:y");
    anchors.push_back({detail::parse_int("anchors", tok.substr(0, colon)), detail::parse_int("anchors", tok.substr(colon + 1))});
  }
  detail::require(static_cast<std::int64_t>(anchors.size()) == d, "instance file: anchor count differs from d");

  const auto& geometry = fields["geometry"];
  auto build = [&]() -> AnyInstance {
    if (geometry == "interval") {
      std::vector<std::int64_t> xs;
      for (const auto& p : anchors) {
        detail::require(p.y == 0, "instance file: interval anchors must have y = 0");
        xs.push_back(p.x);
      }
      return IntervalInstance(m, std::move(xs));
    }
    if (geometry == "grid") return GridInstance(m, std::move(anchors));
    throw InvalidParameters("instance file: unknown geometry '" + geometry + "'");
  };
  InstanceFile out{build(), seed};
  const auto actual_n = std::visit([](const auto& i) { return i.n(); }, out.instance);
  detail::require(actual_n == n, "instance file: n inconsistent with d and m");
  return out;
}

inline InstanceFile read_instance_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  detail::require(static_cast<bool>(is), "cannot open instance file " + path.string());
  return read_instance(is);
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << contents;
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// Sorted coordinate list.
inline void write_points_csv(std::ostream& os, const PointSet& pts) {
  os << "x,y\n";
  for (const auto& p : pts) os << p.x << ',' << p.y << '\n';
}

struct TranscriptRow {
  std::uint64_t run_id = 0;
  std::string protocol;
  std::string params;
  std::uint64_t seed = 0;
  std::size_t total_bits = 0;
  std::size_t rounds = 0;
  std::string answer;
};

inline constexpr const char* transcript_csv_header = "run_id,protocol,params,seed,total_bits,rounds,answer";

inline void write_transcript_row(std::ostream& os, const TranscriptRow& r) {
  os << r.run_id << ',' << r.protocol << ",\"" << r.params << "\"," << r.seed << ',' << r.total_bits << ','
     << r.rounds << ",\"" << r.answer << "\"\n";
}

inline TranscriptRow make_transcript_row(std::uint64_t run_id, std::string protocol, std::string params,
                                         std::uint64_t seed, const Transcript& t, std::string answer) {
  return {run_id, std::move(protocol), std::move(params), seed, t.total_bits(), t.rounds(), std::move(answer)};
}

}  // namespace vcdisj
