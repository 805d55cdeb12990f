#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "halfsym/point_cloud.hpp"

namespace halfsym {

enum class CloudFormat { Xyz, Ply, Npy };
enum class NpyDtype { Float32, Float64 };

/// Infers the format from the extension (.xyz, .ply, .npy; case-insensitive).
CloudFormat format_from_path(const std::filesystem::path& path);
const char* to_string(CloudFormat f);

/// Whitespace-separated `x y z` per line; `#` starts a comment.
PointCloud parse_xyz(std::string_view text);
/// ASCII PLY 1.0; reads x/y/z of the `vertex` element, ignores everything else.
PointCloud parse_ply(std::string_view text);
/// NPY 1.0, C order, dtype `<f4` or `<f8`, shape (N, 3).
PointCloud parse_npy(std::string_view bytes);

std::string encode_xyz(const PointCloud& cloud);
std::string encode_ply(const PointCloud& cloud);
std::string encode_npy(const PointCloud& cloud, NpyDtype dtype = NpyDtype::Float64);

/// Parse errors are rethrown with the path prepended; the byte offset is kept.
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud load_cloud(const std::filesystem::path& path);

/// Text formats use 9 significant digits. Throws IoError naming the path.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format,
                NpyDtype dtype = NpyDtype::Float64);
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace halfsym
