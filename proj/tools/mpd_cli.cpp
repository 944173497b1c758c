// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: corrupt, mock, score, aggregate, split, eval-iqa,
// features, export, fixtures and serve-annotation.

#include <omp.h>

#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpd/aggregate/mos.hpp"
#include "mpd/aggregate/split.hpp"
#include "mpd/annotate/service.hpp"
#include "mpd/common/error.hpp"
#include "mpd/common/table.hpp"
#include "mpd/corruption/dataset.hpp"
#include "mpd/imgcore/io.hpp"
#include "mpd/imgcore/synthetic.hpp"
#include "mpd/ingest/mock.hpp"
#include "mpd/ingest/release.hpp"
#include "mpd/ingest/scoring.hpp"
#include "mpd/stats/evaluate.hpp"
#include "mpd/stats/features.hpp"
#include "mpd/tasks/adapters.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mpd;

namespace {

constexpr const char* kToolVersion = "0.1.0";

void log(const std::string& msg) { std::cerr << "mpd: " << msg << "\n"; }

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw MissingInput(std::string(what) + " not found: " + p.string());
}

corruption::ParamSchedule load_schedule(const std::string& path) {
  if (path.empty()) return corruption::ParamSchedule::load_default();
  require_file(path, "schedule");
  return corruption::ParamSchedule::load(path);
}

json read_json_file(const fs::path& p, const char* what) {
  require_file(p, what);
  try {
    return json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw SchemaError(p.string() + ": " + e.what());
  }
}

std::string versions_text() {
  std::string s = std::string("mpd ") + kToolVersion + "\n";
  s += "schema mpd.schedule v" + std::to_string(corruption::kScheduleVersion) + "\n";
  s += "schema mpd.manifest v" + std::to_string(corruption::kManifestVersion) + "\n";
  s += "schema mpd.responses v" + std::to_string(ingest::kResponsesVersion) + "\n";
  s += "schema mpd.roster v1\n";
  s += "schema mpd.normalization v1\n";
  s += "schema mpd.release v" + std::to_string(ingest::kReleaseVersion) + "\n";
  s += "schema mpd.annotation-log v" + std::to_string(annotate::kEventLogVersion) + "\n";
  s += std::string("opencv codecs: ") + (imgcore::have_opencv_backend() ? "yes" : "no") + "\n";
  return s;
}

std::map<std::string, annotate::QABundle> load_qa(const std::string& path,
                                                  const std::vector<corruption::PairRecord>& pairs) {
  std::map<std::string, annotate::QABundle> out;
  if (!path.empty()) {
    require_file(path, "QA bundles");
    for (auto& b : annotate::read_bundles(path)) out.emplace(b.image_id, std::move(b));
    return out;
  }
  for (const auto& p : pairs)
    if (!out.count(p.ref_id)) out.emplace(p.ref_id, annotate::synthetic_bundle(p.ref_id));
  return out;
}

std::vector<stats::NamedTarget> mos_targets(const std::vector<aggregate::MosRecord>& mos) {
  std::vector<stats::NamedTarget> t(1 + tasks::kNumDimensions);
  t[0].name = "mos";
  for (int d = 0; d < tasks::kNumDimensions; ++d) {
    t[1 + d].name = "dim_" + std::string(tasks::dimension_name(static_cast<tasks::Dimension>(d)));
  }
  for (const auto& r : mos) {
    t[0].values.push(r.pair_id, r.mos);
    for (int d = 0; d < tasks::kNumDimensions; ++d) t[1 + d].values.push(r.pair_id, r.dims[d]);
  }
  return t;
}

std::vector<fs::path> list_images(const fs::path& root) {
  std::vector<fs::path> out;
  if (fs::is_regular_file(root)) return {root};
  if (!fs::is_directory(root)) throw MissingInput("images not found: " + root.string());
  static const std::set<std::string> exts = {".png", ".ppm", ".pgm", ".jpg", ".jpeg", ".webp", ".bmp"};
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && exts.count(e.path().extension().string())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

annotate::AnnotationServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-task perceptual quality dataset toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", versions_text());
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);

  // corrupt
  std::string refs, schedule, out, ext = ".png";
  std::uint64_t seed = 0;
  auto* corrupt = app.add_subcommand("corrupt", "Generate the distorted images and pair manifest");
  corrupt->add_option("--refs", refs, "Reference listing (JSONL: ref_id, content_type, path)")->required();
  corrupt->add_option("--schedule", schedule, "Parameter schedule (default: bundled)");
  corrupt->add_option("--seed", seed, "Master seed")->required();
  corrupt->add_option("--out", out, "Output directory")->required();
  corrupt->add_option("--ext", ext, "Distorted image extension (.png or .ppm)");

  // mock
  std::string manifest, qa, roster_path;
  double sensitivity = 1.0;
  auto* mock = app.add_subcommand("mock", "Write deterministic mock subject responses");
  mock->add_option("--manifest", manifest)->required();
  mock->add_option("--qa", qa, "QA bundles (JSONL; default: synthetic per reference)");
  mock->add_option("--roster", roster_path, "Subject roster (default: standard mock roster)");
  mock->add_option("--schedule", schedule);
  mock->add_option("--sensitivity", sensitivity)->check(CLI::NonNegativeNumber);
  mock->add_option("--seed", seed)->required();
  mock->add_option("--out", out, "Responses file")->required();

  // score
  std::string responses, spice_cfg, embed_cfg, ret_anchor = "top1";
  bool no_bleu = false, no_cider = false;
  auto* score = app.add_subcommand("score", "Score distorted-image responses against reference responses");
  score->add_option("--manifest", manifest)->required();
  score->add_option("--responses", responses)->required();
  score->add_option("--roster", roster_path);
  score->add_option("--out", out, "Score table (TSV)")->required();
  score->add_flag("--no-bleu", no_bleu);
  score->add_flag("--no-cider", no_cider);
  score->add_option("--spice-adapter", spice_cfg, "Adapter config JSON for SPICE");
  score->add_option("--embedder-adapter", embed_cfg, "Adapter config JSON for VQA embeddings");
  score->add_option("--ret-anchor", ret_anchor)->check(CLI::IsMember({"top1", "overlap"}));

  // aggregate
  std::string scores, weights, norm_in, norm_out, pooling = "normalize-then-average";
  bool allow_partial = false, percentile_clip = false;
  auto* aggregate = app.add_subcommand("aggregate", "Normalize scores and compute MOS");
  aggregate->add_option("--scores", scores)->required();
  aggregate->add_option("--weights", weights, "Dimension weights JSON");
  aggregate->add_option("--out", out, "MOS table (TSV)")->required();
  aggregate->add_option("--normalization", norm_in, "Use these ranges instead of fitting");
  aggregate->add_option("--normalization-out", norm_out, "Where to write the ranges (default: next to --out)");
  aggregate->add_flag("--allow-partial", allow_partial);
  aggregate->add_flag("--percentile-clip", percentile_clip);
  aggregate->add_option("--pooling", pooling)->check(CLI::IsMember({"normalize-then-average", "average-then-normalize"}));

  // split
  std::string mos_path;
  double threshold = aggregate::kMildThreshold;
  double train_fraction = 0.8;
  auto* split = app.add_subcommand("split", "Train/val split and mild/severe labels");
  split->add_option("--mos", mos_path)->required();
  split->add_option("--manifest", manifest)->required();
  split->add_option("--seed", seed)->required();
  split->add_option("--out", out)->required();
  split->add_option("--threshold", threshold);
  split->add_option("--train-fraction", train_fraction)->check(CLI::Range(0.0, 1.0));

  // eval-iqa
  std::string preds, splits_path, pred_column = "score", json_out;
  bool logistic = false;
  auto* eval = app.add_subcommand("eval-iqa", "Correlate IQA predictions with MOS");
  eval->add_option("--preds", preds, "Predictions (TSV: pair_id, score)")->required();
  eval->add_option("--mos", mos_path)->required();
  eval->add_option("--splits", splits_path);
  eval->add_option("--manifest", manifest)->required();
  eval->add_option("--out", out, "Report (TSV)")->required();
  eval->add_option("--json", json_out, "Structured summary");
  eval->add_option("--pred-column", pred_column);
  eval->add_flag("--logistic", logistic);

  // features
  std::string images;
  auto* feat = app.add_subcommand("features", "Low-level image descriptors");
  feat->add_option("--images", images, "Image file or directory")->required();
  feat->add_option("--out", out)->required();

  // export
  std::string norm_path;
  auto* exp = app.add_subcommand("export", "Write a release bundle with provenance and completeness");
  exp->add_option("--manifest", manifest)->required();
  exp->add_option("--responses", responses)->required();
  exp->add_option("--scores", scores)->required();
  exp->add_option("--mos", mos_path)->required();
  exp->add_option("--splits", splits_path)->required();
  exp->add_option("--normalization", norm_path)->required();
  exp->add_option("--weights", weights);
  exp->add_option("--schedule", schedule);
  exp->add_option("--out", out)->required();

  // fixtures
  int count = 5, size = 128;
  auto* fixtures = app.add_subcommand("fixtures", "Write synthetic reference images, a listing and QA bundles");
  fixtures->add_option("--count", count)->check(CLI::PositiveNumber);
  fixtures->add_option("--size", size)->check(CLI::Range(16, 4096));
  fixtures->add_option("--out", out)->required();

  // serve-annotation
  std::string corpus, state_dir, host = "127.0.0.1", experts;
  int port = 8080;
  auto* serve = app.add_subcommand("serve-annotation", "Run the annotation service");
  serve->add_option("--corpus", corpus, "QA bundles used to initialise an empty state directory");
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--state-dir", state_dir)->required();
  serve->add_option("--host", host);
  serve->add_option("--experts", experts, "Comma-separated expert ids (default: any)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : InvalidInput("").exit_code();
  }

  if (jobs > 0) omp_set_num_threads(jobs);

  try {
    if (*corrupt) {
      require_file(refs, "reference listing");
      const auto sched = load_schedule(schedule);
      const auto entries = corruption::read_references(refs);
      corruption::GenerateOptions opts;
      opts.out_dir = out;
      opts.master_seed = seed;
      opts.extension = ext;
      const auto rep = corruption::generate_dataset(entries, sched, opts);
      for (const auto& s : rep.skipped) log("skipped " + s.ref_id + ": " + s.reason);
      log("wrote " + std::to_string(rep.manifest.pairs.size()) + " pairs to " + out);
      return rep.ok() ? 0 : MissingInput("").exit_code();
    }

    if (*mock) {
      require_file(manifest, "manifest");
      const auto man = corruption::read_manifest(manifest);
      const auto sched = load_schedule(schedule);
      const auto roster = roster_path.empty() ? ingest::SubjectRoster::standard_mock()
                                              : ingest::SubjectRoster::load(roster_path);
      ingest::MockProfile profile;
      profile.sensitivity = sensitivity;
      profile.seed = seed;
      const auto recs = ingest::mock_responses(profile, roster, man.pairs, load_qa(qa, man.pairs), sched);
      ingest::write_responses(out, recs);
      log("wrote " + std::to_string(recs.size()) + " responses to " + out);
      return 0;
    }

    if (*score) {
      require_file(manifest, "manifest");
      require_file(responses, "responses");
      const auto man = corruption::read_manifest(manifest);
      std::optional<ingest::SubjectRoster> roster;
      if (!roster_path.empty()) roster = ingest::SubjectRoster::load(roster_path);
      ingest::LoadOptions lo;
      lo.roster = roster ? &*roster : nullptr;
      const auto set = ingest::load_responses(responses, lo);
      for (const auto& r : set.rejects) log("rejected line " + std::to_string(r.line) + " (" + r.reason + "): " + r.detail);

      std::unique_ptr<tasks::ExternalSpice> spice;
      std::unique_ptr<tasks::ExternalEmbedder> embedder;
      if (!spice_cfg.empty()) {
        spice = std::make_unique<tasks::ExternalSpice>(tasks::AdapterConfig::from_json(read_json_file(spice_cfg, "SPICE adapter config")));
      }
      if (!embed_cfg.empty()) {
        embedder = std::make_unique<tasks::ExternalEmbedder>(
            tasks::AdapterConfig::from_json(read_json_file(embed_cfg, "embedder adapter config")));
      }
      ingest::ScoringOptions so;
      so.use_bleu = !no_bleu;
      so.use_cider = !no_cider;
      so.spice = spice.get();
      so.embedder = embedder.get();
      so.ret_anchor = ret_anchor == "overlap" ? tasks::RetrievalAnchor::kTopIOverlap : tasks::RetrievalAnchor::kReferenceTop1;
      const auto res = ingest::score_pairs(man.pairs, set, so);
      for (const auto& w : res.warnings) log(w);
      res.table.save(out);
      log("wrote " + std::to_string(res.table.rows().size()) + " scores to " + out);
      return 0;
    }

    if (*aggregate) {
      require_file(scores, "score table");
      const auto table = aggregate::SubjectScoreTable::load(scores);
      aggregate::NormalizationParams params;
      if (!norm_in.empty()) {
        params = aggregate::NormalizationParams::from_json(read_json_file(norm_in, "normalization"));
      } else {
        aggregate::FitOptions fo;
        fo.percentile_clip = percentile_clip;
        fo.order = pooling == "average-then-normalize" ? aggregate::PoolingOrder::kAverageThenNormalize
                                                       : aggregate::PoolingOrder::kNormalizeThenAverage;
        params = aggregate::fit_normalization(table, fo);
      }
      aggregate::MosOptions mo;
      mo.allow_partial = allow_partial;
      if (!weights.empty()) mo.weights = aggregate::DimensionWeights::from_json(read_json_file(weights, "weights"));
      const auto res = aggregate::compute_mos(table, params, mo);
      for (const auto& id : res.incomplete) log("incomplete pair " + id);
      aggregate::write_mos(out, res.records);
      const fs::path np = norm_out.empty() ? fs::path(out).parent_path() / "normalization.json" : fs::path(norm_out);
      write_file(np, params.to_json().dump(2) + "\n");
      log("wrote " + std::to_string(res.records.size()) + " MOS records to " + out);
      return 0;
    }

    if (*split) {
      require_file(mos_path, "MOS table");
      require_file(manifest, "manifest");
      const auto man = corruption::read_manifest(manifest);
      const auto mos = aggregate::read_mos(mos_path);
      auto s = aggregate::split_train_val(man.pairs, seed, train_fraction);
      aggregate::ThresholdRule rule;
      rule.threshold = threshold;
      for (const auto& w : aggregate::split_mild_severe(s, man.pairs, mos, rule)) log(w);
      aggregate::write_splits(out, s);
      log("train " + std::to_string(s.count(aggregate::SplitLabel::kTrain)) + ", mild " +
          std::to_string(s.count(aggregate::SplitLabel::kMild)) + ", severe " +
          std::to_string(s.count(aggregate::SplitLabel::kSevere)));
      return 0;
    }

    if (*eval) {
      require_file(preds, "predictions");
      require_file(mos_path, "MOS table");
      require_file(manifest, "manifest");
      const auto man = corruption::read_manifest(manifest);
      const auto p = stats::read_scores(preds, pred_column);
      std::set<std::string> known;
      for (const auto& pr : man.pairs) known.insert(pr.pair_id);
      for (const auto& id : p.ids)
        if (!known.count(id)) throw AlignmentError("prediction for unknown pair " + id, id);
      const auto mos = aggregate::read_mos(mos_path);
      std::optional<aggregate::SplitAssignment> s;
      if (!splits_path.empty()) {
        require_file(splits_path, "splits");
        s = aggregate::read_splits(splits_path);
      }
      std::set<std::string> scored;
      for (const auto& r : mos) scored.insert(r.pair_id);
      auto subsets = aggregate::standard_subsets(man.pairs, s ? &*s : nullptr);
      for (auto& sub : subsets) std::erase_if(sub.ids, [&](const std::string& id) { return !scored.count(id); });
      const auto ev = stats::evaluate_metric(p, mos_targets(mos), subsets, logistic);
      for (const auto& w : ev.warnings) log(w);
      write_file(out, stats::format_reports(ev.reports));
      if (!json_out.empty()) write_file(json_out, stats::reports_to_json(ev).dump(2) + "\n");
      return 0;
    }

    if (*feat) {
      const auto files = list_images(images);
      std::vector<stats::FeatureProfile> prof(files.size());
#pragma omp parallel for schedule(dynamic, 1)
      for (long i = 0; i < static_cast<long>(files.size()); ++i) prof[i] = stats::features(imgcore::read_image(files[i]));
      Table t;
      t.header = {"image", "luminance", "contrast", "chrominance", "blur", "spatial_information"};
      const fs::path base = fs::is_directory(images) ? fs::path(images) : fs::path(images).parent_path();
      for (std::size_t i = 0; i < files.size(); ++i) {
        const auto& f = prof[i];
        t.rows.push_back({fs::relative(files[i], base).generic_string(), format_double(f.luminance),
                          format_double(f.contrast), format_double(f.chrominance), format_double(f.blur),
                          format_double(f.spatial_information)});
      }
      write_table(out, t);
      return 0;
    }

    if (*exp) {
      for (const auto& [p, what] : std::vector<std::pair<std::string, const char*>>{
               {manifest, "manifest"}, {responses, "responses"}, {scores, "score table"},
               {mos_path, "MOS table"}, {splits_path, "splits"}, {norm_path, "normalization"}}) {
        require_file(p, what);
      }
      ingest::Release r;
      r.manifest = corruption::read_manifest(manifest);
      r.responses = ingest::load_responses(responses).records;
      r.scores = aggregate::SubjectScoreTable::load(scores);
      r.mos = aggregate::read_mos(mos_path);
      r.splits = aggregate::read_splits(splits_path);
      r.normalization = aggregate::NormalizationParams::from_json(read_json_file(norm_path, "normalization"));
      if (!weights.empty()) r.weights = aggregate::DimensionWeights::from_json(read_json_file(weights, "weights"));
      r.schedule_hash = load_schedule(schedule).hash();
      const auto rep = ingest::export_dataset(out, r);
      log(std::to_string(rep.annotations) + "/" + std::to_string(rep.expected_annotations) + " annotations, " +
          std::to_string(rep.complete_pairs) + "/" + std::to_string(rep.pairs) + " complete pairs");
      for (std::size_t i = 0; i < rep.missing.size() && i < 20; ++i) log("incomplete: " + rep.missing[i]);
      return 0;
    }

    if (*fixtures) {
      const char* types[] = {"NSI", "SCI", "AIGI"};
      std::string listing;
      std::vector<annotate::QABundle> bundles;
      for (int i = 0; i < count; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "ref%04d", i);
        const std::string rel = std::string("refs/") + id + ".ppm";
        imgcore::write_image(fs::path(out) / rel, imgcore::synthetic_image(i, size, size));
        listing += json{{"ref_id", id}, {"content_type", types[i % 3]}, {"path", rel}}.dump() + "\n";
        bundles.push_back(annotate::synthetic_bundle(id));
      }
      write_file(fs::path(out) / "refs.jsonl", listing);
      annotate::write_bundles((fs::path(out) / "qa.jsonl").string(), bundles);
      log("wrote " + std::to_string(count) + " references to " + out);
      return 0;
    }

    if (*serve) {
      if (!fs::exists(fs::path(state_dir) / "corpus.jsonl")) {
        if (corpus.empty()) throw MissingInput("state directory is empty; pass --corpus to initialise it");
        require_file(corpus, "corpus");
        std::vector<std::string> ex;
        if (!experts.empty()) ex = mpd::split(experts, ',');
        annotate::AnnotationService::init(state_dir, annotate::read_bundles(corpus), ex);
      }
      annotate::AnnotationService svc(state_dir);
      if (!svc.recovery().clean()) {
        log("event log recovered: dropped " + std::to_string(svc.recovery().dropped_lines) + " line(s), " +
            svc.recovery().first_error);
      }
      annotate::AnnotationServer server(svc);
      if (port == 0) {
        port = server.bind_any_port(host);
      } else if (!server.bind(host, port)) {
        throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
      }
      log("serving annotation on http://" + host + ":" + std::to_string(port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    json j = {{"error", e.what()}, {"exit_code", e.exit_code()}};
    if (const auto* a = dynamic_cast<const AlignmentError*>(&e)) j["first_id"] = a->first_id();
    std::cerr << j.dump() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"exit_code", 1}}.dump() << "\n";
    return 1;
  }
  return 0;
}
