#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "halfsym/cli.hpp"

int main(int argc, char** argv) {
  using halfsym::cli::RunConfig;
  RunConfig config;
  CLI::App app{"halfsym: reflection-symmetry analysis, half-object datasets and point cloud "
               "generation metrics"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "Input manifest file or directory of clouds")
        ->required();
    sub->add_option("--class", config.class_label, "Class label recorded in outputs")
        ->capture_default_str();
    sub->add_option("--workers", config.workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { config.seed = s; }, "Random seed");
  };

  auto* prep = app.add_subcommand("prep", "Build a half-object dataset from full shapes");
  add_common(prep);
  prep->add_option("--output", config.output, "Output directory")->required();
  prep->add_flag("--dedup-boundary", config.dedup_boundary,
                 "Assign points with x = 0 to the right half only");

  auto* stats = app.add_subcommand("stats", "Derive normalization statistics into a manifest");
  add_common(stats);
  stats->add_option("--output", config.output, "Manifest to write (default: rewrite --input)");
  stats->add_option("--split", config.split, "Split to derive statistics from (default val)");

  auto* symmetry = app.add_subcommand("symmetry", "Per-shape reflection symmetry scores");
  add_common(symmetry);
  symmetry->add_option("--output", config.output, "Report directory")->required();
  symmetry->add_option("--plane", config.plane, "Plane as nx,ny,nz,px,py,pz")->capture_default_str();
  symmetry->add_option("--bins", config.bins, "Histogram bins")->capture_default_str();
  symmetry->add_option("--split", config.split, "Only score this split (train|val|test|all)");

  auto* recon = app.add_subcommand("reconstruct", "Mirror half-shapes back into full shapes");
  add_common(recon);
  recon->add_option("--output", config.output, "Output directory")->required();
  recon->add_option("--stats", config.stats, "Manifest holding normalization statistics");
  recon->add_option("--fps-target", config.fps_target, "Points after FPS (0 disables FPS)")
      ->capture_default_str();
  recon->add_option("--denorm", config.denorm, "default (x*s+mu) or paper-literal (x*s-mu)")
      ->capture_default_str()
      ->check(CLI::IsMember({"default", "paper-literal"}));
  add_seed(recon);

  auto* eval = app.add_subcommand("eval", "1-NNA (CD/EMD) and FPD against a reference set");
  add_common(eval);
  eval->add_option("--reference", config.reference, "Reference manifest or directory")->required();
  eval->add_option("--output", config.output, "Report directory")->required();
  eval->add_option("--distance", config.distance, "cd, emd or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"cd", "emd", "both"}));
  eval->add_option("--emd-tol", config.emd_tol, "Relative tolerance of the approximate EMD")
      ->capture_default_str();
  eval->add_option("--split", config.split, "Reference split (default val when present)");
  eval->add_option("--label", config.label, "Model name for the results table")
      ->capture_default_str();
  eval->add_option("--features-generated", config.features_generated,
                   "External feature table for the generated set");
  eval->add_option("--features-reference", config.features_reference,
                   "External feature table for the reference set");
  add_seed(eval);

  auto* verify = app.add_subcommand("verify", "Check that every manifest entry parses");
  verify->add_option("--input", config.input, "Manifest file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : halfsym::cli::kExitInvalid;
  }
  config.command = app.get_subcommands().front()->get_name();
  return halfsym::cli::run(config, std::cout, std::cerr);
}
