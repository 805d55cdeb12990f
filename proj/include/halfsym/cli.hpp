#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "halfsym/geometry.hpp"

namespace halfsym::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitInvalid = 2;

/// Options shared by all subcommands. Defaults here are the documented CLI
/// defaults.
struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path reference;           ///< eval
  std::filesystem::path stats;               ///< reconstruct: manifest holding (mu, sigma)
  std::filesystem::path features_generated;  ///< eval: external feature table
  std::filesystem::path features_reference;
  std::string class_label = "shape";
  std::string label = "generated";  ///< eval: row label in the results table
  std::string plane = "1,0,0,0,0,0";
  std::size_t bins = 50;
  std::string distance = "both";  ///< cd | emd | both
  double emd_tol = 0.01;
  std::size_t fps_target = 2048;  ///< 0 disables FPS
  std::string denorm = "default";
  std::string split;  ///< stats: source split (default val); symmetry/eval: filter
  bool dedup_boundary = false;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

/// "nx,ny,nz,px,py,pz"; the normal is normalized. Throws InvalidInput.
Plane parse_plane(const std::string& spec);

int cmd_prep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_symmetry(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on `config.command`; library errors become exit code 2.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace halfsym::cli
