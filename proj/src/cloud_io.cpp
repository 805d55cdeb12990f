#include "halfsym/cloud_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "halfsym/error.hpp"

namespace halfsym {

static_assert(std::endian::native == std::endian::little,
              "NPY support assumes a little-endian host");

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

double parse_double(std::string_view token, std::size_t offset) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(fmt::format("invalid number '{}'", token), offset);
  }
  return v;
}

std::size_t parse_size(std::string_view token, std::size_t offset) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(fmt::format("invalid count '{}'", token), offset);
  }
  return v;
}

// PointCloud rejects non-finite coordinates with ValidationError.
PointCloud make_cloud(std::vector<Vec3> points) { return PointCloud(std::move(points)); }

// Splits text into whitespace-separated tokens while tracking byte offsets.
class Tokenizer {
public:
  Tokenizer(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  std::optional<std::string_view> next() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    if (pos_ >= text_.size()) return std::nullopt;
    start_ = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start_, pos_ - start_);
  }
  std::size_t start() const { return start_; }
  std::size_t pos() const { return pos_; }

private:
  std::string_view text_;
  std::size_t pos_;
  std::size_t start_ = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

CloudFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".xyz") return CloudFormat::Xyz;
  if (ext == ".ply") return CloudFormat::Ply;
  if (ext == ".npy") return CloudFormat::Npy;
  throw InvalidInput(fmt::format("unknown point cloud extension '{}' for '{}'", ext, path.string()));
}

const char* to_string(CloudFormat f) {
  switch (f) {
    case CloudFormat::Xyz: return "xyz";
    case CloudFormat::Ply: return "ply";
    case CloudFormat::Npy: return "npy";
  }
  return "?";
}

PointCloud parse_xyz(std::string_view text) {
  std::vector<Vec3> points;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    Tokenizer tok(line, 0);
    double xyz[3];
    int count = 0;
    while (auto t = tok.next()) {
      if (count == 3) throw ParseError("more than three values on a line", line_start + tok.start());
      xyz[count++] = parse_double(*t, line_start + tok.start());
    }
    if (count != 0 && count != 3) {
      throw ParseError(fmt::format("expected 3 values, found {}", count), line_start);
    }
    if (count == 3) points.emplace_back(xyz[0], xyz[1], xyz[2]);
    line_start = line_end + 1;
  }
  return make_cloud(std::move(points));
}

PointCloud parse_ply(std::string_view text) {
  struct Property {
    std::string name;
    bool is_list = false;
  };
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;
  };

  std::vector<Element> elements;
  std::size_t pos = 0;
  bool saw_format = false;
  bool first = true;
  for (;;) {
    if (pos >= text.size()) throw ParseError("missing end_header", pos);
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t line_offset = pos;
    pos = end + 1;

    Tokenizer tok(line, 0);
    std::vector<std::string_view> words;
    while (auto t = tok.next()) words.push_back(*t);
    if (first) {
      if (words.size() != 1 || words[0] != "ply") throw ParseError("missing 'ply' magic", 0);
      first = false;
      continue;
    }
    if (words.empty()) continue;
    const std::string_view key = words[0];
    if (key == "end_header") break;
    if (key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      if (words.size() != 3) throw ParseError("malformed format line", line_offset);
      if (words[1] != "ascii") {
        throw ParseError(fmt::format("unsupported PLY format '{}'", words[1]), line_offset);
      }
      if (words[2] != "1.0") throw ParseError("unsupported PLY version", line_offset);
      saw_format = true;
    } else if (key == "element") {
      if (words.size() != 3) throw ParseError("malformed element line", line_offset);
      elements.push_back({std::string(words[1]), parse_size(words[2], line_offset), {}});
    } else if (key == "property") {
      if (elements.empty()) throw ParseError("property before any element", line_offset);
      if (words.size() == 3) {
        elements.back().properties.push_back({std::string(words[2]), false});
      } else if (words.size() == 5 && words[1] == "list") {
        elements.back().properties.push_back({std::string(words[4]), true});
      } else {
        throw ParseError("malformed property line", line_offset);
      }
    } else {
      throw ParseError(fmt::format("unknown header keyword '{}'", key), line_offset);
    }
  }
  if (!saw_format) throw ParseError("missing format line", 0);

  const auto vertex = std::find_if(elements.begin(), elements.end(),
                                   [](const Element& e) { return e.name == "vertex"; });
  if (vertex == elements.end()) throw ParseError("no vertex element", pos);
  int col[3] = {-1, -1, -1};
  for (std::size_t p = 0; p < vertex->properties.size(); ++p) {
    const auto& name = vertex->properties[p].name;
    for (int a = 0; a < 3; ++a) {
      if (name == std::string(1, static_cast<char>('x' + a)) && !vertex->properties[p].is_list) {
        col[a] = static_cast<int>(p);
      }
    }
  }
  if (col[0] < 0 || col[1] < 0 || col[2] < 0) {
    throw ParseError("vertex element lacks x/y/z properties", pos);
  }

  Tokenizer tok(text, pos);
  auto next = [&]() -> std::string_view {
    auto t = tok.next();
    if (!t) throw ParseError("unexpected end of data", text.size());
    return *t;
  };
  std::vector<Vec3> points;
  points.reserve(vertex->count);
  for (const auto& element : elements) {
    const bool is_vertex = &element == &*vertex;
    for (std::size_t i = 0; i < element.count; ++i) {
      Vec3 p = Vec3::Zero();
      for (std::size_t k = 0; k < element.properties.size(); ++k) {
        const auto t = next();
        if (element.properties[k].is_list) {
          const std::size_t n = parse_size(t, tok.start());
          for (std::size_t s = 0; s < n; ++s) next();
          continue;
        }
        if (!is_vertex) continue;
        for (int a = 0; a < 3; ++a) {
          if (static_cast<int>(k) == col[a]) p[a] = parse_double(t, tok.start());
        }
      }
      if (is_vertex) points.push_back(p);
    }
  }
  return make_cloud(std::move(points));
}

PointCloud parse_npy(std::string_view bytes) {
  static constexpr char kMagic[] = "\x93NUMPY";
  if (bytes.size() < 10 || bytes.substr(0, 6) != std::string_view(kMagic, 6)) {
    throw ParseError("missing NPY magic", 0);
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  const auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw ParseError(fmt::format("unsupported NPY version {}.{}", major, minor), 6);
  }
  const std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                                 (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  if (bytes.size() < 10 + header_len) throw ParseError("truncated NPY header", bytes.size());
  const std::string_view header = bytes.substr(10, header_len);

  auto value_of = [&](std::string_view key) -> std::pair<std::string_view, std::size_t> {
    const std::string quoted = fmt::format("'{}'", key);
    const auto k = header.find(quoted);
    if (k == std::string_view::npos) throw ParseError(fmt::format("NPY header lacks {}", quoted), 10);
    auto v = header.find(':', k + quoted.size());
    if (v == std::string_view::npos) throw ParseError("malformed NPY header", 10 + k);
    ++v;
    while (v < header.size() && header[v] == ' ') ++v;
    return {header.substr(v), 10 + v};
  };

  const auto [descr, descr_off] = value_of("descr");
  std::size_t item = 0;
  if (descr.starts_with("'<f4'")) {
    item = 4;
  } else if (descr.starts_with("'<f8'")) {
    item = 8;
  } else {
    throw ParseError(fmt::format("unsupported dtype {}", descr.substr(0, descr.find(','))), descr_off);
  }
  const auto [order, order_off] = value_of("fortran_order");
  if (!order.starts_with("False")) throw ParseError("Fortran-ordered arrays are not supported", order_off);

  const auto [shape, shape_off] = value_of("shape");
  if (shape.empty() || shape.front() != '(') throw ParseError("malformed shape", shape_off);
  const auto close = shape.find(')');
  if (close == std::string_view::npos) throw ParseError("malformed shape", shape_off);
  std::vector<std::size_t> dims;
  {
    std::string_view inner = shape.substr(1, close - 1);
    std::size_t p = 0;
    while (p < inner.size()) {
      while (p < inner.size() && (inner[p] == ' ' || inner[p] == ',')) ++p;
      if (p >= inner.size()) break;
      std::size_t q = p;
      while (q < inner.size() && inner[q] != ',' && inner[q] != ' ') ++q;
      dims.push_back(parse_size(inner.substr(p, q - p), shape_off + 1 + p));
      p = q;
    }
  }
  if (dims.size() != 2 || dims[1] != 3) {
    std::string s;
    for (auto d : dims) s += fmt::format("{},", d);
    throw ParseError(fmt::format("expected shape (N, 3), got ({})", s), shape_off);
  }

  const std::size_t n = dims[0];
  const std::size_t data_off = 10 + header_len;
  const std::size_t expected = n * 3 * item;
  if (bytes.size() - data_off != expected) {
    throw ParseError(fmt::format("expected {} data bytes, found {}", expected, bytes.size() - data_off),
                     data_off);
  }
  std::vector<Vec3> points(n);
  const char* data = bytes.data() + data_off;
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) {
      const char* src = data + (3 * i + static_cast<std::size_t>(a)) * item;
      if (item == 4) {
        float f;
        std::memcpy(&f, src, 4);
        points[i][a] = f;
      } else {
        double d;
        std::memcpy(&d, src, 8);
        points[i][a] = d;
      }
    }
  }
  return make_cloud(std::move(points));
}

std::string encode_xyz(const PointCloud& cloud) {
  std::string out;
  for (const auto& p : cloud) out += fmt::format("{:.9g} {:.9g} {:.9g}\n", p.x(), p.y(), p.z());
  return out;
}

std::string encode_ply(const PointCloud& cloud) {
  std::string out = fmt::format(
      "ply\nformat ascii 1.0\nelement vertex {}\nproperty float x\nproperty float y\n"
      "property float z\nend_header\n",
      cloud.size());
  out += encode_xyz(cloud);
  return out;
}

std::string encode_npy(const PointCloud& cloud, NpyDtype dtype) {
  const bool f4 = dtype == NpyDtype::Float32;
  std::string header = fmt::format("{{'descr': '{}', 'fortran_order': False, 'shape': ({}, 3), }}",
                                   f4 ? "<f4" : "<f8", cloud.size());
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header += '\n';

  std::string out("\x93NUMPY\x01\x00", 8);
  out += static_cast<char>(header.size() & 0xff);
  out += static_cast<char>((header.size() >> 8) & 0xff);
  out += header;
  const std::size_t item = f4 ? 4 : 8;
  const std::size_t data_off = out.size();
  out.resize(data_off + cloud.size() * 3 * item);
  char* dst = out.data() + data_off;
  for (const auto& p : cloud) {
    for (int a = 0; a < 3; ++a) {
      if (f4) {
        const auto f = static_cast<float>(p[a]);
        std::memcpy(dst, &f, 4);
      } else {
        const double d = p[a];
        std::memcpy(dst, &d, 8);
      }
      dst += item;
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("read failed for '{}'", path.string()));
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  const std::string bytes = read_file(path);
  try {
    switch (format) {
      case CloudFormat::Xyz: return parse_xyz(bytes);
      case CloudFormat::Ply: return parse_ply(bytes);
      case CloudFormat::Npy: return parse_npy(bytes);
    }
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.detail()), e.offset());
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
  throw InvalidInput("unknown cloud format");
}

PointCloud load_cloud(const std::filesystem::path& path) {
  return load_cloud(path, format_from_path(path));
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format,
                NpyDtype dtype) {
  switch (format) {
    case CloudFormat::Xyz: write_file(path, encode_xyz(cloud)); return;
    case CloudFormat::Ply: write_file(path, encode_ply(cloud)); return;
    case CloudFormat::Npy: write_file(path, encode_npy(cloud, dtype)); return;
  }
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  save_cloud(cloud, path, format_from_path(path));
}

}  // namespace halfsym
