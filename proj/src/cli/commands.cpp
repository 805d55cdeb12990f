#include "halfsym/cli.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "halfsym/chamfer.hpp"
#include "halfsym/cloud_io.hpp"
#include "halfsym/dataset.hpp"
#include "halfsym/emd.hpp"
#include "halfsym/error.hpp"
#include "halfsym/features.hpp"
#include "halfsym/frechet.hpp"
#include "halfsym/manifest.hpp"
#include "halfsym/nna.hpp"
#include "halfsym/parallel.hpp"
#include "halfsym/report.hpp"
#include "halfsym/sampling.hpp"

namespace halfsym::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestName = "manifest.txt";

struct LoadedSet {
  std::vector<ShapeRecord> shapes;
  std::vector<std::string> failures;
};

using EntryFilter = std::function<bool(const ManifestEntry&)>;

// Loads the ok entries accepted by `keep`, in manifest order.
LoadedSet load_entries(const DatasetManifest& m, const EntryFilter& keep, unsigned workers) {
  std::vector<const ManifestEntry*> picked;
  LoadedSet set;
  for (const auto& e : m.entries) {
    if (!keep(e)) continue;
    if (!e.ok()) {
      set.failures.push_back(fmt::format("{}: {}", e.id, e.status));
      continue;
    }
    picked.push_back(&e);
  }
  std::vector<std::optional<ShapeRecord>> slots(picked.size());
  std::vector<std::string> errors(picked.size());
  parallel_for(picked.size(), workers, [&](std::size_t i) {
    try {
      slots[i] = load_record(m, *picked[i]);
    } catch (const Error& e) {
      errors[i] = fmt::format("{}: {}", picked[i]->id, e.what());
    }
  });
  for (std::size_t i = 0; i < picked.size(); ++i) {
    if (slots[i]) {
      set.shapes.push_back(std::move(*slots[i]));
    } else {
      set.failures.push_back(errors[i]);
    }
  }
  return set;
}

void require_path(const fs::path& p, const char* flag) {
  if (p.empty()) throw InvalidInput(fmt::format("missing required option {}", flag));
}

void require_exists(const fs::path& p) {
  if (!fs::exists(p)) throw IoError(fmt::format("input path '{}' does not exist", p.string()));
}

DenormMode parse_denorm(const std::string& s) {
  if (s == "default") return DenormMode::Standard;
  if (s == "paper-literal") return DenormMode::PaperLiteral;
  throw InvalidInput(fmt::format("--denorm must be 'default' or 'paper-literal', got '{}'", s));
}

std::string render(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

// Entry filter for an optional --split value.
EntryFilter split_filter(const std::string& split) {
  if (split.empty() || split == "all") return [](const ManifestEntry&) { return true; };
  const Split s = parse_split(split);
  return [s](const ManifestEntry& e) { return e.split == s; };
}

void warn_failures(const std::vector<std::string>& failures, std::ostream& err) {
  for (const auto& f : failures) err << "warning: skipped " << f << '\n';
}

}  // namespace

Plane parse_plane(const std::string& spec) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto end = spec.find(',', start);
    if (end == std::string::npos) end = spec.size();
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(spec.data() + start, spec.data() + end, x);
    if (ec != std::errc() || ptr != spec.data() + end) {
      throw InvalidInput(fmt::format("--plane: bad number in '{}'", spec));
    }
    v.push_back(x);
    start = end + 1;
  }
  if (v.size() != 6) throw InvalidInput("--plane expects nx,ny,nz,px,py,pz");
  return Plane::from_direction(Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5]));
}

int cmd_prep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.input, "--input");
  require_path(config.output, "--output");
  require_exists(config.input);
  const DatasetManifest input = open_dataset(config.input, config.class_label, ShapeKind::Full);

  HalfDatasetOptions options;
  options.dedup_boundary = config.dedup_boundary;
  options.workers = config.workers;
  err << fmt::format("[prep] converting {} shapes into {}\n", input.entries.size(),
                     config.output.string());
  HalfDatasetResult result;
  try {
    result = build_half_dataset(input, config.output, options);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  write_manifest(result.manifest, config.output / kManifestName);
  for (const auto& e : result.manifest.entries) {
    if (!e.ok()) err << "warning: " << e.id << ": " << e.status << '\n';
  }
  out << fmt::format("shapes: {}\nconverted: {}\nfailed: {}\npassed_through: {}\nmanifest: {}\n",
                     result.manifest.entries.size(), result.converted, result.failed,
                     result.passed_through, (config.output / kManifestName).string());
  return result.failed == 0 ? kExitOk : kExitPartial;
}

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.input, "--input");
  require_exists(config.input);
  const bool is_dir = fs::is_directory(config.input);
  if (is_dir) require_path(config.output, "--output");
  const fs::path target = config.output.empty() ? config.input : config.output;

  DatasetManifest m = open_dataset(config.input, config.class_label, ShapeKind::Full);
  const std::string split = config.split.empty() ? "val" : config.split;
  const Split wanted = parse_split(split);
  LoadedSet set = load_entries(
      m, [&](const ManifestEntry& e) { return e.split == wanted && e.kind == ShapeKind::Full; },
      config.workers);
  warn_failures(set.failures, err);
  if (set.shapes.empty()) {
    err << fmt::format("error: no full shapes in split '{}' of '{}'\n", split, config.input.string());
    return kExitInvalid;
  }
  std::vector<PointCloud> clouds;
  clouds.reserve(set.shapes.size());
  for (auto& s : set.shapes) clouds.push_back(std::move(s.cloud));
  const NormalizationStats stats = compute_normalization(clouds);

  m.normalization = Normalization{stats.mean, stats.scale, split, "population"};
  m.params["stats.shapes"] = std::to_string(clouds.size());
  if (is_dir || config.output != config.input) {
    // Entry paths were relative to the input location; rebase them.
    const fs::path new_base = fs::absolute(target).parent_path().lexically_normal();
    for (auto& e : m.entries) {
      if (e.path == "-") continue;
      const fs::path abs = fs::absolute(m.resolve(e)).lexically_normal();
      e.path = abs.lexically_relative(new_base).generic_string();
    }
    m.base_dir = target.parent_path();
  }
  if (!target.parent_path().empty()) fs::create_directories(target.parent_path());
  write_manifest(m, target);
  out << fmt::format("split: {}\nshapes: {}\nmean: {} {} {}\nscale: {}\nmanifest: {}\n", split,
                     clouds.size(), format_number(stats.mean.x()), format_number(stats.mean.y()),
                     format_number(stats.mean.z()), format_number(stats.scale), target.string());
  return set.failures.empty() ? kExitOk : kExitPartial;
}

int cmd_symmetry(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.input, "--input");
  require_path(config.output, "--output");
  require_exists(config.input);
  if (config.bins == 0) throw InvalidInput("--bins must be at least 1");
  const Plane plane = parse_plane(config.plane);
  const DatasetManifest m = open_dataset(config.input, config.class_label, ShapeKind::Full);
  LoadedSet set = load_entries(m, split_filter(config.split), config.workers);
  warn_failures(set.failures, err);
  if (set.shapes.empty()) {
    err << "error: no shapes could be scored\n";
    return kExitInvalid;
  }

  std::vector<ScoreEntry> scores(set.shapes.size());
  parallel_for(set.shapes.size(), config.workers, [&](std::size_t i) {
    scores[i] = {set.shapes[i].id, symmetry_score(set.shapes[i].cloud, plane).value};
  });

  // Inputs confined to one side of x = 0 are half-objects, not full shapes.
  std::size_t one_sided = 0;
  for (const auto& s : set.shapes) {
    const bool all_nonneg =
        std::all_of(s.cloud.begin(), s.cloud.end(), [](const Vec3& p) { return p.x() >= 0.0; });
    const bool has_positive =
        std::any_of(s.cloud.begin(), s.cloud.end(), [](const Vec3& p) { return p.x() > 0.0; });
    if (all_nonneg && has_positive) ++one_sided;
  }
  const std::size_t half_entries = static_cast<std::size_t>(std::count_if(
      m.entries.begin(), m.entries.end(), [](const auto& e) { return e.kind == ShapeKind::Half; }));
  const std::size_t flagged = std::max(one_sided, half_entries);

  const MetricReport report = build_report(std::move(scores), config.bins, "symmetry_cd");
  fs::create_directories(config.output);
  write_file(config.output / "symmetry_scores.csv",
             render([&](std::ostream& os) { write_scores_csv(report, os); }));
  write_file(config.output / "symmetry_histogram.csv",
             render([&](std::ostream& os) { write_histogram_csv(report, os); }));
  write_file(config.output / "symmetry_histogram.svg", render([&](std::ostream& os) {
               write_histogram_svg(report, os,
                                   fmt::format("{}: reflection symmetry (CD), plane {}",
                                               config.class_label, plane.to_string()));
             }));
  write_file(config.output / "symmetry_summary.csv", render([&](std::ostream& os) {
               write_summary_csv(report, os);
               os << "skipped," << set.failures.size() << "\r\n";
               os << "half_object_inputs," << flagged << "\r\n";
               os << "plane," << csv_field(plane.to_string()) << "\r\n";
             }));

  if (flagged > 0) {
    err << fmt::format(
        "warning: {} input(s) look like half-objects; large symmetry scores are expected\n",
        flagged);
  }
  const auto& a = report.aggregate;
  out << fmt::format("shapes: {}\nskipped: {}\nmean: {}\nstd: {}\nmin: {}\nmax: {}\n", a.count,
                     set.failures.size(), format_number(a.mean), format_number(a.std),
                     format_number(a.min), format_number(a.max));
  if (flagged > 0) out << fmt::format("sanity: {} half-object input(s)\n", flagged);
  return set.failures.empty() ? kExitOk : kExitPartial;
}

int cmd_reconstruct(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.input, "--input");
  require_path(config.output, "--output");
  require_exists(config.input);
  const DenormMode mode = parse_denorm(config.denorm);
  const DatasetManifest m = open_dataset(config.input, config.class_label, ShapeKind::Half);

  std::optional<Normalization> norm = m.normalization;
  if (!config.stats.empty()) {
    require_exists(config.stats);
    norm = read_manifest(config.stats).normalization;
  }
  if (!norm) {
    err << "error: no normalization statistics available; derive them with `halfsym stats "
           "--input <manifest> --split val` and pass that manifest via --stats\n";
    return kExitInvalid;
  }

  LoadedSet set = load_entries(
      m, [](const ManifestEntry& e) { return e.kind == ShapeKind::Half; }, config.workers);
  warn_failures(set.failures, err);
  if (set.shapes.empty()) {
    err << "error: input holds no half-shapes\n";
    return kExitInvalid;
  }

  fs::create_directories(config.output);
  struct Row {
    std::size_t half_points = 0;
    std::size_t out_points = 0;
    double pre = 0.0;
    double post = 0.0;
    std::string error;
  };
  std::vector<Row> rows(set.shapes.size());
  parallel_for(set.shapes.size(), config.workers, [&](std::size_t i) {
    const ShapeRecord& rec = set.shapes[i];
    Row& row = rows[i];
    try {
      row.half_points = rec.cloud.size();
      const PointCloud full = denormalize(reconstruct_full(rec.cloud), norm->mean, norm->scale, mode);
      row.pre = symmetry_score(full).value;
      PointCloud final_cloud = full;
      if (config.fps_target > 0) {
        final_cloud = config.seed ? farthest_point_sample_seeded(full, config.fps_target, *config.seed + i)
                                  : farthest_point_sample(full, config.fps_target);
        row.post = symmetry_score(final_cloud).value;
      } else {
        row.post = row.pre;
      }
      row.out_points = final_cloud.size();
      const fs::path rel(rec.id + ".npy");
      fs::create_directories((config.output / rel).parent_path());
      save_cloud(final_cloud, config.output / rel, CloudFormat::Npy);
    } catch (const Error& e) {
      row.error = e.what();
    }
  });

  DatasetManifest result;
  result.class_label = m.class_label.empty() ? config.class_label : m.class_label;
  result.source = m.source;
  result.normalization = norm;
  result.params = m.params;
  result.notes = m.notes;
  result.params["reconstruct.denorm"] = to_string(mode);
  result.params["reconstruct.fps_target"] = std::to_string(config.fps_target);
  result.params["reconstruct.fps_start"] =
      config.seed ? fmt::format("seeded:{}", *config.seed) : "0";
  result.base_dir = config.output;
  std::size_t failed = set.failures.size();
  std::string csv = "id,points_half,points_out,symmetry_pre_fps,symmetry_post_fps\r\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ManifestEntry e;
    e.id = set.shapes[i].id;
    e.split = set.shapes[i].split;
    e.kind = ShapeKind::Full;
    if (rows[i].error.empty()) {
      e.points = rows[i].out_points;
      e.path = e.id + ".npy";
      csv += fmt::format("{},{},{},{},{}\r\n", csv_field(e.id), rows[i].half_points,
                         rows[i].out_points, format_number(rows[i].pre),
                         format_number(rows[i].post));
    } else {
      ++failed;
      e.path = "-";
      e.status = "failed: " + rows[i].error;
      err << "warning: " << e.id << ": " << rows[i].error << '\n';
    }
    result.entries.push_back(std::move(e));
  }
  write_manifest(result, config.output / kManifestName);
  write_file(config.output / "reconstruct_scores.csv", csv);

  double max_pre = 0.0, max_post = 0.0;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    max_pre = std::max(max_pre, r.pre);
    max_post = std::max(max_post, r.post);
  }
  out << fmt::format(
      "shapes: {}\nfailed: {}\nmax_symmetry_pre_fps: {}\nmax_symmetry_post_fps: {}\nmanifest: {}\n",
      rows.size(), failed, format_number(max_pre), format_number(max_post),
      (config.output / kManifestName).string());
  return failed == 0 ? kExitOk : kExitPartial;
}

namespace {

std::vector<FeatureVector> features_for(const std::vector<ShapeRecord>& shapes,
                                        const FeatureExtractor& extractor, unsigned workers) {
  std::vector<FeatureVector> f(shapes.size());
  parallel_for(shapes.size(), workers,
               [&](std::size_t i) { f[i] = extractor.extract(shapes[i].id, shapes[i].cloud); });
  return f;
}

}  // namespace

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.input, "--input");
  require_path(config.reference, "--reference");
  require_path(config.output, "--output");
  require_exists(config.input);
  require_exists(config.reference);
  if (config.distance != "cd" && config.distance != "emd" && config.distance != "both") {
    throw InvalidInput("--distance must be cd, emd or both");
  }
  if (config.features_generated.empty() != config.features_reference.empty()) {
    throw InvalidInput("--features-generated and --features-reference must be given together");
  }

  const DatasetManifest gen_m = open_dataset(config.input, config.class_label, ShapeKind::Full);
  const DatasetManifest ref_m = open_dataset(config.reference, config.class_label, ShapeKind::Full);
  for (const auto* m : {&gen_m, &ref_m}) {
    if (std::any_of(m->entries.begin(), m->entries.end(),
                    [](const auto& e) { return e.kind == ShapeKind::Half; })) {
      err << "error: eval expects full shapes; run `halfsym reconstruct` on half-shapes first\n";
      return kExitInvalid;
    }
  }
  std::string ref_split = config.split;
  if (ref_split.empty()) {
    const bool has_val = std::any_of(ref_m.entries.begin(), ref_m.entries.end(),
                                     [](const auto& e) { return e.split == Split::Val; });
    ref_split = has_val ? "val" : "all";
  }
  LoadedSet gen = load_entries(gen_m, split_filter("all"), config.workers);
  LoadedSet ref = load_entries(ref_m, split_filter(ref_split), config.workers);
  warn_failures(gen.failures, err);
  warn_failures(ref.failures, err);
  if (gen.shapes.empty() || ref.shapes.empty()) {
    err << "error: both generated and reference sets need at least one shape\n";
    return kExitInvalid;
  }
  const std::size_t points = gen.shapes.front().cloud.size();
  for (const auto* set : {&gen, &ref}) {
    for (const auto& s : set->shapes) {
      if (s.cloud.size() != points) {
        err << fmt::format(
            "error: resolution mismatch: '{}' has {} points, expected {} (resample first)\n", s.id,
            s.cloud.size(), points);
        return kExitInvalid;
      }
    }
  }

  std::vector<PointCloud> all;
  for (const auto* set : {&gen, &ref}) {
    for (const auto& s : set->shapes) all.push_back(s.cloud);
  }
  const std::size_t ng = gen.shapes.size();
  const std::size_t nr = ref.shapes.size();
  auto id_of = [&](std::size_t k) -> const std::string& {
    return k < ng ? gen.shapes[k].id : ref.shapes[k - ng].id;
  };

  fs::create_directories(config.output);
  std::vector<std::pair<std::string, std::string>> summary = {
      {"class", config.class_label},
      {"generated_count", std::to_string(ng)},
      {"reference_count", std::to_string(nr)},
      {"reference_split", ref_split},
      {"points_per_shape", std::to_string(points)},
  };
  std::optional<NnaResult> nna_cd, nna_emd;
  for (const ShapeDistance d : {ShapeDistance::Chamfer, ShapeDistance::Emd}) {
    const bool want = config.distance == "both" ||
                      (d == ShapeDistance::Chamfer ? config.distance == "cd" : config.distance == "emd");
    if (!want) continue;
    const std::string name = d == ShapeDistance::Chamfer ? "cd" : "emd";
    err << fmt::format("[eval] {} pairwise {} distances\n", (ng + nr) * (ng + nr - 1) / 2, name);
    PairwiseOptions po;
    po.distance = d;
    po.emd_tolerance = config.emd_tol;
    po.workers = config.workers;
    NnaResult r = one_nn_accuracy(pairwise_distances(all, po), ng, nr);
    std::string csv = "id,set,nearest_id,nearest_set,distance,correct\r\n";
    for (const auto& rec : r.nearest) {
      csv += fmt::format("{},{},{},{},{},{}\r\n", csv_field(id_of(rec.shape)),
                         rec.generated ? "generated" : "reference", csv_field(id_of(rec.neighbor)),
                         rec.neighbor < ng ? "generated" : "reference", format_number(rec.distance),
                         rec.correct ? 1 : 0);
    }
    write_file(config.output / fmt::format("nearest_{}.csv", name), csv);
    summary.emplace_back(fmt::format("1nna_{}", name), format_number(r.accuracy));
    summary.emplace_back(fmt::format("1nna_{}_generated", name), format_number(r.generated_accuracy));
    summary.emplace_back(fmt::format("1nna_{}_reference", name), format_number(r.reference_accuracy));
    (d == ShapeDistance::Chamfer ? nna_cd : nna_emd) = std::move(r);
  }

  std::unique_ptr<FeatureExtractor> gen_x, ref_x;
  if (config.features_generated.empty()) {
    gen_x = std::make_unique<MomentFeatureExtractor>();
    ref_x = std::make_unique<MomentFeatureExtractor>();
  } else {
    gen_x = std::make_unique<ExternalFeatureTable>(ExternalFeatureTable::load(config.features_generated));
    ref_x = std::make_unique<ExternalFeatureTable>(ExternalFeatureTable::load(config.features_reference));
  }
  std::optional<FpdResult> fpd, fpd_floor;
  const std::string extractor = gen_x->label();
  if (ng >= 2 && nr >= 2) {
    const auto fg = features_for(gen.shapes, *gen_x, config.workers);
    const auto fr = features_for(ref.shapes, *ref_x, config.workers);
    fpd = frechet_point_distance(fg, fr);
    if (nr >= 4) {
      // Lower bound: FPD between two random halves of the reference set.
      std::vector<std::size_t> order(nr);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::mt19937_64 rng(config.seed.value_or(0));
      for (std::size_t i = nr - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
      std::vector<FeatureVector> a, b;
      for (std::size_t i = 0; i < nr; ++i) (i < nr / 2 ? a : b).push_back(fr[order[i]]);
      fpd_floor = frechet_point_distance(a, b);
    }
    if (fpd->undersampled) {
      err << fmt::format("warning: FPD uses fewer than D + 1 = {} samples per set; covariance is "
                         "singular\n",
                         fpd->dimension + 1);
    }
  } else {
    err << "warning: FPD needs at least two shapes per set; skipped\n";
  }
  summary.emplace_back("fpd", fpd ? format_number(fpd->value) : "");
  summary.emplace_back("fpd_reference_split", fpd_floor ? format_number(fpd_floor->value) : "");
  summary.emplace_back("fpd_extractor", extractor);
  summary.emplace_back("fpd_undersampled", fpd && fpd->undersampled ? "true" : "false");
  summary.emplace_back("emd_solver", points <= kExactEmdCap ? "exact" : "approximate");
  summary.emplace_back("emd_tolerance", format_number(config.emd_tol));
  summary.emplace_back("nna_tie_rule", "ties count as misclassified");

  std::string csv = "metric,value\r\n";
  for (const auto& [k, v] : summary) csv += fmt::format("{},{}\r\n", k, csv_field(v));
  write_file(config.output / "eval_summary.csv", csv);

  auto pct = [](const std::optional<NnaResult>& r) {
    return r ? fmt::format("{:.2f}", 100.0 * r->accuracy) : std::string("-");
  };
  auto num = [](const std::optional<FpdResult>& r) {
    return r ? fmt::format("{:.4f}", r->value) : std::string("-");
  };
  std::string table;
  table += fmt::format("| Class | Model | 1-NNA CD (%) | 1-NNA EMD (%) | FPD [{}] |\n", extractor);
  table += "|---|---|---|---|---|\n";
  table += fmt::format("| {} | {} | {} | {} | {} |\n", config.class_label, config.label,
                       pct(nna_cd), pct(nna_emd), num(fpd));
  table += fmt::format("| {} | Reference (lower bound) | - | - | {} |\n", config.class_label,
                       num(fpd_floor));
  write_file(config.output / "eval_table.md", table);
  out << table;
  return gen.failures.empty() && ref.failures.empty() ? kExitOk : kExitPartial;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.input, "--input");
  require_exists(config.input);
  if (fs::is_directory(config.input)) throw InvalidInput("verify expects a manifest file");
  const DatasetManifest m = read_manifest(config.input);
  const VerifyReport r = verify_manifest(m);
  for (const auto& p : r.problems) err << "problem: " << p << '\n';
  out << fmt::format("checked: {}\nfailed_entries: {}\nproblems: {}\n", r.checked, m.failed_count(),
                     r.problems.size());
  return r.ok() ? kExitOk : kExitPartial;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  static const std::pair<const char*, int (*)(const RunConfig&, std::ostream&, std::ostream&)>
      kCommands[] = {{"prep", cmd_prep},         {"stats", cmd_stats}, {"symmetry", cmd_symmetry},
                     {"reconstruct", cmd_reconstruct}, {"eval", cmd_eval},   {"verify", cmd_verify}};
  for (const auto& [name, fn] : kCommands) {
    if (config.command != name) continue;
    try {
      return fn(config, out, err);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
  }
  err << fmt::format("error: unknown command '{}'\n", config.command);
  return kExitInvalid;
}

}  // namespace halfsym::cli
