#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halfsym/point_cloud.hpp"

namespace halfsym {

enum class Split { Train, Val, Test };
enum class ShapeKind { Full, Half };

const char* to_string(Split s);
const char* to_string(ShapeKind k);
Split parse_split(std::string_view s);

struct ManifestEntry {
  std::string id;
  Split split = Split::Train;
  ShapeKind kind = ShapeKind::Full;
  std::size_t points = 0;
  /// Relative to the manifest's directory unless absolute; "-" for failures.
  std::string path;
  /// "ok" or "failed: <reason>".
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
};

struct Normalization {
  Vec3 mean = Vec3::Zero();
  double scale = 1.0;
  std::string split;  ///< split the statistics were derived from
  std::string estimator = "population";
};

/// One prepared dataset: shapes, optional normalization statistics and the
/// parameters that produced it.
///
/// On disk this is a line-oriented text file:
///
///   halfsym-manifest 1
///   class: <label>
///   source: <free text>
///   normalization: none | present
///   normalization.mean: <x> <y> <z>        (only when present)
///   normalization.scale: <sigma>           (only when present)
///   normalization.split: <split>           (only when present)
///   normalization.estimator: <estimator>   (only when present)
///   param.<key>: <value>                   (sorted by key)
///   note: <text>                           (in insertion order)
///   entries: <count>
///   id<TAB>split<TAB>kind<TAB>points<TAB>status<TAB>path
///   <one tab-separated row per entry>
///
/// Numbers use the shortest round-trip decimal form, so rewriting an unchanged
/// manifest reproduces it byte for byte.
struct DatasetManifest {
  std::string class_label;
  std::string source;
  std::optional<Normalization> normalization;
  std::map<std::string, std::string> params;
  std::vector<std::string> notes;
  std::vector<ManifestEntry> entries;
  /// Directory the relative entry paths resolve against. Not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const ManifestEntry& e) const;
  std::size_t failed_count() const;
};

std::string serialize_manifest(const DatasetManifest& manifest);
/// Throws ParseError with the byte offset of the first bad line and
/// ValidationError for duplicate ids or a non-positive scale.
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Manifest over every .xyz/.ply/.npy file below `dir`, sorted by path. A file
/// whose parent directory is named train, val or test gets that split; all
/// others are train. Ids are the relative paths without extension.
DatasetManifest manifest_from_directory(const std::filesystem::path& dir,
                                        std::string class_label, ShapeKind kind);

/// Reads a manifest file, or scans a directory as above.
DatasetManifest open_dataset(const std::filesystem::path& path, std::string class_label,
                             ShapeKind directory_kind);

struct ShapeRecord {
  std::string id;
  PointCloud cloud;
  Split split = Split::Train;
};

ShapeRecord load_record(const DatasetManifest& manifest, const ManifestEntry& entry);

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Every ok entry must exist and parse to its declared point count.
VerifyReport verify_manifest(const DatasetManifest& manifest);

}  // namespace halfsym
