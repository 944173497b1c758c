// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/corruption/dataset.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mpd/common/error.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/common/table.hpp"
#include "mpd/imgcore/io.hpp"

namespace mpd::corruption {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view content_type_name(ContentType t) {
  switch (t) {
    case ContentType::kNSI: return "NSI";
    case ContentType::kSCI: return "SCI";
    case ContentType::kAIGI: return "AIGI";
  }
  return "?";
}

ContentType parse_content_type(std::string_view s) {
  if (s == "NSI") return ContentType::kNSI;
  if (s == "SCI") return ContentType::kSCI;
  if (s == "AIGI") return ContentType::kAIGI;
  throw SchemaError("unknown content_type '" + std::string(s) + "'");
}

namespace {

json parse_line(const std::string& line, const fs::path& file, int lineno) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key, const fs::path& file, int lineno) {
  if (!j.contains(key)) {
    throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": missing '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": bad type for '" + key + "'");
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

std::string image_name(const PairRecord& r, const std::string& ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d_", kind_row(r.spec.kind));
  return buf + std::string(kind_name(r.spec.kind)) + "_L" + std::to_string(r.spec.level) + ext;
}

}  // namespace

std::vector<ReferenceEntry> read_references(const fs::path& listing) {
  const auto lines = lines_of(read_file(listing));
  std::vector<ReferenceEntry> refs;
  std::set<std::string> seen;
  int lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    const json j = parse_line(line, listing, lineno);
    ReferenceEntry e;
    e.ref_id = field<std::string>(j, "ref_id", listing, lineno);
    if (e.ref_id.empty() || e.ref_id.find_first_of("/\\ \t") != std::string::npos) {
      throw SchemaError("invalid ref_id '" + e.ref_id + "'");
    }
    e.content_type = parse_content_type(field<std::string>(j, "content_type", listing, lineno));
    fs::path p = field<std::string>(j, "path", listing, lineno);
    e.path = p.is_absolute() ? p : listing.parent_path() / p;
    if (!seen.insert(e.ref_id).second) throw SchemaError("duplicate ref_id '" + e.ref_id + "'");
    refs.push_back(std::move(e));
  }
  return refs;
}

std::string make_pair_id(std::string_view ref_id, CorruptionKind kind) {
  return std::string(ref_id) + "__" + std::string(kind_name(kind));
}

std::vector<PairRecord> plan_pairs(const ReferenceEntry& ref, std::uint64_t master_seed,
                                   const ParamSchedule& sched, const Backends& backends) {
  std::vector<PairRecord> out;
  out.reserve(kNumKinds);
  for (CorruptionKind k : all_kinds()) {
    Rng rng(derive_seed(master_seed, ref.ref_id, static_cast<std::uint64_t>(kind_row(k))));
    PairRecord r;
    r.ref_id = ref.ref_id;
    r.content_type = ref.content_type;
    r.spec.kind = k;
    r.spec.level = 1 + static_cast<int>(rng.below(kNumLevels));
    r.spec.seed = rng.next_u64();
    r.pair_id = make_pair_id(ref.ref_id, k);
    r.schedule_hash = sched.hash();
    r.flags = substitution_flags(r.spec, backends);
    out.push_back(std::move(r));
  }
  return out;
}

void write_manifest(const fs::path& path, const Manifest& m) {
  std::string text;
  json header = {{"schema", "mpd.manifest"},
                 {"version", kManifestVersion},
                 {"rng", m.rng},
                 {"master_seed", m.master_seed}};
  text += header.dump() + "\n";
  for (const auto& r : m.pairs) {
    json j = {{"pair_id", r.pair_id},
              {"ref_id", r.ref_id},
              {"content_type", content_type_name(r.content_type)},
              {"kind", kind_name(r.spec.kind)},
              {"level", r.spec.level},
              {"seed", r.spec.seed},
              {"path", r.path},
              {"schedule_hash", r.schedule_hash},
              {"flags", r.flags}};
    text += j.dump() + "\n";
  }
  write_file(path, text);
}

Manifest read_manifest(const fs::path& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty()) throw SchemaError(path.string() + ": empty manifest");
  const json header = parse_line(lines[0], path, 1);
  if (header.value("schema", "") != "mpd.manifest") {
    throw SchemaError(path.string() + ": not a pair manifest");
  }
  if (header.value("version", 0) != kManifestVersion) {
    throw SchemaError(path.string() + ": unsupported manifest version");
  }
  Manifest m;
  m.master_seed = field<std::uint64_t>(header, "master_seed", path, 1);
  m.rng = field<std::string>(header, "rng", path, 1);
  if (m.rng != kRngName) throw SchemaError("manifest rng '" + m.rng + "' is not supported");
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int ln = static_cast<int>(i) + 1;
    const json j = parse_line(lines[i], path, ln);
    PairRecord r;
    r.pair_id = field<std::string>(j, "pair_id", path, ln);
    r.ref_id = field<std::string>(j, "ref_id", path, ln);
    r.content_type = parse_content_type(field<std::string>(j, "content_type", path, ln));
    const auto kind = parse_kind(field<std::string>(j, "kind", path, ln));
    if (!kind) throw SchemaError(path.string() + ":" + std::to_string(ln) + ": unknown kind");
    r.spec.kind = *kind;
    r.spec.level = field<int>(j, "level", path, ln);
    if (r.spec.level < 1 || r.spec.level > kNumLevels) {
      throw SchemaError(path.string() + ":" + std::to_string(ln) + ": level out of range");
    }
    r.spec.seed = field<std::uint64_t>(j, "seed", path, ln);
    r.path = field<std::string>(j, "path", path, ln);
    r.schedule_hash = field<std::string>(j, "schedule_hash", path, ln);
    r.flags = j.value("flags", "");
    if (!seen.insert(r.pair_id).second) throw SchemaError("duplicate pair_id '" + r.pair_id + "'");
    m.pairs.push_back(std::move(r));
  }
  return m;
}

GenerateReport generate_dataset(const std::vector<ReferenceEntry>& refs,
                                const ParamSchedule& sched, const GenerateOptions& opts) {
  const int n = static_cast<int>(refs.size());
  std::vector<std::vector<PairRecord>> per_ref(refs.size());
  std::vector<std::string> skip_reason(refs.size());
  std::exception_ptr fatal;
  std::mutex fatal_mu;

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    {
      std::lock_guard lock(fatal_mu);
      if (fatal) continue;
    }
    const ReferenceEntry& ref = refs[i];
    imgcore::ImageBuf img;
    try {
      img = imgcore::read_image(ref.path);
    } catch (const Error& e) {
      skip_reason[i] = e.what();
      continue;
    }
    try {
      auto pairs = plan_pairs(ref, opts.master_seed, sched, opts.backends);
      for (auto& p : pairs) {
        p.path = "images/" + ref.ref_id + "/" + image_name(p, opts.extension);
        imgcore::write_image(opts.out_dir / p.path, apply(img, p.spec, sched, opts.backends));
      }
      per_ref[i] = std::move(pairs);
    } catch (...) {
      std::lock_guard lock(fatal_mu);
      if (!fatal) fatal = std::current_exception();
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  GenerateReport report;
  report.manifest.master_seed = opts.master_seed;
  report.manifest.rng = std::string(kRngName);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (!skip_reason[i].empty()) {
      report.skipped.push_back({refs[i].ref_id, skip_reason[i]});
      continue;
    }
    for (auto& p : per_ref[i]) report.manifest.pairs.push_back(std::move(p));
  }
  write_manifest(opts.out_dir / "manifest.jsonl", report.manifest);
  return report;
}

}  // namespace mpd::corruption
