#include "halfsym/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "halfsym/cloud_io.hpp"
#include "halfsym/error.hpp"
#include "halfsym/report.hpp"

namespace halfsym {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "halfsym-manifest 1";
constexpr std::string_view kTableHeader = "id\tsplit\tkind\tpoints\tstatus\tpath";

std::string one_line(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\n' || c == '\r' || c == '\t'; },
                  ' ');
  return out;
}

double parse_number(std::string_view s, std::size_t offset) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(fmt::format("invalid number '{}'", s), offset);
  }
  return v;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto p = s.find(sep, start);
    if (p == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

}  // namespace

const char* to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

const char* to_string(ShapeKind k) { return k == ShapeKind::Full ? "full" : "half"; }

Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw InvalidInput(fmt::format("unknown split '{}' (expected train, val or test)", s));
}

fs::path DatasetManifest::resolve(const ManifestEntry& e) const {
  const fs::path p(e.path);
  return p.is_absolute() ? p : base_dir / p;
}

std::size_t DatasetManifest::failed_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.ok(); }));
}

std::string serialize_manifest(const DatasetManifest& m) {
  std::string out;
  out += kMagic;
  out += '\n';
  out += fmt::format("class: {}\n", one_line(m.class_label));
  out += fmt::format("source: {}\n", one_line(m.source));
  if (m.normalization) {
    const auto& n = *m.normalization;
    out += "normalization: present\n";
    out += fmt::format("normalization.mean: {} {} {}\n", format_number(n.mean.x()),
                       format_number(n.mean.y()), format_number(n.mean.z()));
    out += fmt::format("normalization.scale: {}\n", format_number(n.scale));
    out += fmt::format("normalization.split: {}\n", one_line(n.split));
    out += fmt::format("normalization.estimator: {}\n", one_line(n.estimator));
  } else {
    out += "normalization: none\n";
  }
  for (const auto& [k, v] : m.params) out += fmt::format("param.{}: {}\n", one_line(k), one_line(v));
  for (const auto& note : m.notes) out += fmt::format("note: {}\n", one_line(note));
  out += fmt::format("entries: {}\n", m.entries.size());
  out += kTableHeader;
  out += '\n';
  for (const auto& e : m.entries) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", one_line(e.id), to_string(e.split),
                       to_string(e.kind), e.points, one_line(e.status), one_line(e.path));
  }
  return out;
}

DatasetManifest parse_manifest(std::string_view text, const fs::path& base_dir) {
  DatasetManifest m;
  m.base_dir = base_dir;

  std::vector<std::pair<std::string_view, std::size_t>> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line, pos);
    pos = end + 1;
  }
  if (lines.empty() || lines[0].first != kMagic) throw ParseError("not a halfsym manifest", 0);

  std::size_t i = 1;
  std::optional<std::size_t> declared;
  bool has_norm = false;
  Normalization norm;
  for (; i < lines.size(); ++i) {
    const auto [line, off] = lines[i];
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string_view::npos) {
      throw ParseError(fmt::format("expected 'key: value', got '{}'", line), off);
    }
    const auto k = line.substr(0, colon);
    const auto value = line.substr(colon + 2);

    if (k == "class") {
      m.class_label = value;
    } else if (k == "source") {
      m.source = value;
    } else if (k == "normalization") {
      if (value != "none" && value != "present") throw ParseError("bad normalization flag", off);
      has_norm = value == "present";
    } else if (k == "normalization.mean") {
      const auto parts = split_on(value, ' ');
      if (parts.size() != 3) throw ParseError("normalization.mean needs three numbers", off);
      for (int a = 0; a < 3; ++a) norm.mean[a] = parse_number(parts[static_cast<std::size_t>(a)], off);
    } else if (k == "normalization.scale") {
      norm.scale = parse_number(value, off);
    } else if (k == "normalization.split") {
      norm.split = value;
    } else if (k == "normalization.estimator") {
      norm.estimator = value;
    } else if (k.starts_with("param.")) {
      m.params[std::string(k.substr(6))] = std::string(value);
    } else if (k == "note") {
      m.notes.emplace_back(value);
    } else if (k == "entries") {
      std::size_t n = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError("bad entry count", off);
      }
      declared = n;
      ++i;
      break;
    } else {
      throw ParseError(fmt::format("unknown manifest key '{}'", k), off);
    }
  }
  if (!declared) throw ParseError("manifest has no 'entries' line", text.size());
  if (i >= lines.size() || lines[i].first != kTableHeader) {
    throw ParseError("missing entry table header", i < lines.size() ? lines[i].second : text.size());
  }
  ++i;

  std::set<std::string, std::less<>> ids;
  for (; i < lines.size(); ++i) {
    const auto [line, off] = lines[i];
    if (line.empty()) continue;
    const auto cols = split_on(line, '\t');
    if (cols.size() != 6) throw ParseError(fmt::format("entry needs 6 columns, has {}", cols.size()), off);
    ManifestEntry e;
    e.id = cols[0];
    try {
      e.split = parse_split(cols[1]);
    } catch (const InvalidInput&) {
      throw ParseError(fmt::format("bad split '{}'", cols[1]), off);
    }
    if (cols[2] == "full") {
      e.kind = ShapeKind::Full;
    } else if (cols[2] == "half") {
      e.kind = ShapeKind::Half;
    } else {
      throw ParseError(fmt::format("bad kind '{}'", cols[2]), off);
    }
    const auto [ptr, ec] = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), e.points);
    if (ec != std::errc() || ptr != cols[3].data() + cols[3].size()) {
      throw ParseError("bad point count", off);
    }
    e.status = cols[4];
    e.path = cols[5];
    if (e.id.empty()) throw ParseError("empty shape id", off);
    if (!ids.insert(e.id).second) throw ValidationError(fmt::format("duplicate shape id '{}'", e.id));
    m.entries.push_back(std::move(e));
  }
  if (m.entries.size() != *declared) {
    throw ParseError(
        fmt::format("manifest declares {} entries but lists {}", *declared, m.entries.size()),
        text.size());
  }
  if (has_norm) {
    if (!(norm.scale > 0.0)) throw ValidationError("normalization scale must be positive");
    m.normalization = norm;
  }
  return m;
}

DatasetManifest read_manifest(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_manifest(text, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.detail()), e.offset());
  }
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  write_file(path, serialize_manifest(manifest));
}

DatasetManifest manifest_from_directory(const fs::path& dir, std::string class_label,
                                        ShapeKind kind) {
  if (!fs::is_directory(dir)) throw IoError(fmt::format("'{}' is not a directory", dir.string()));
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    try {
      format_from_path(entry.path());
    } catch (const InvalidInput&) {
      continue;
    }
    files.push_back(fs::relative(entry.path(), dir));
  }
  std::sort(files.begin(), files.end());

  DatasetManifest m;
  m.class_label = std::move(class_label);
  m.source = dir.filename().string();
  m.base_dir = dir;
  for (const auto& rel : files) {
    ManifestEntry e;
    e.id = (rel.parent_path() / rel.stem()).generic_string();
    e.kind = kind;
    e.path = rel.generic_string();
    const std::string parent = rel.parent_path().filename().string();
    e.split = (parent == "val" || parent == "test") ? parse_split(parent) : Split::Train;
    try {
      e.points = load_cloud(dir / rel).size();
    } catch (const Error& err) {
      e.status = fmt::format("failed: {}", one_line(err.what()));
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

DatasetManifest open_dataset(const fs::path& path, std::string class_label,
                             ShapeKind directory_kind) {
  if (!fs::exists(path)) throw IoError(fmt::format("input '{}' does not exist", path.string()));
  if (fs::is_directory(path)) return manifest_from_directory(path, std::move(class_label), directory_kind);
  return read_manifest(path);
}

ShapeRecord load_record(const DatasetManifest& manifest, const ManifestEntry& entry) {
  if (!entry.ok()) throw ValidationError(fmt::format("shape '{}' is marked {}", entry.id, entry.status));
  return {entry.id, load_cloud(manifest.resolve(entry)), entry.split};
}

VerifyReport verify_manifest(const DatasetManifest& manifest) {
  VerifyReport r;
  if (manifest.normalization && !(manifest.normalization->scale > 0.0)) {
    r.problems.push_back("normalization scale is not positive");
  }
  for (const auto& e : manifest.entries) {
    if (!e.ok()) continue;
    ++r.checked;
    const fs::path p = manifest.resolve(e);
    if (!fs::exists(p)) {
      r.problems.push_back(fmt::format("{}: file '{}' does not exist", e.id, p.string()));
      continue;
    }
    try {
      const auto n = load_cloud(p).size();
      if (n != e.points) {
        r.problems.push_back(fmt::format("{}: declared {} points, file has {}", e.id, e.points, n));
      }
    } catch (const Error& err) {
      r.problems.push_back(fmt::format("{}: {}", e.id, err.what()));
    }
  }
  return r;
}

}  // namespace halfsym
