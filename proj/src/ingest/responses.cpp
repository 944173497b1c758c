// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/ingest/responses.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mpd/common/error.hpp"
#include "mpd/common/hash.hpp"
#include "mpd/common/table.hpp"
#include "mpd/tasks/text.hpp"

namespace mpd::ingest {

namespace fs = std::filesystem;
using nlohmann::json;
using tasks::Task;

long ResponseSet::find(const std::string& image_id, const std::string& subject, Task t) const {
  auto it = index_.find({image_id, subject, t});
  return it == index_.end() ? -1 : it->second;
}

void ResponseSet::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < records.size(); ++i) {
    index_[{records[i].image_id, records[i].subject, records[i].task}] = static_cast<long>(i);
  }
}

std::vector<std::uint8_t> encode_pbm(const tasks::SegMask& m) {
  const std::string header = "P4\n" + std::to_string(m.width) + " " + std::to_string(m.height) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const int row_bytes = (m.width + 7) / 8;
  for (int y = 0; y < m.height; ++y) {
    for (int b = 0; b < row_bytes; ++b) {
      std::uint8_t byte = 0;
      for (int k = 0; k < 8; ++k) {
        const int x = b * 8 + k;
        if (x < m.width && m.at(x, y)) byte |= static_cast<std::uint8_t>(0x80 >> k);
      }
      out.push_back(byte);
    }
  }
  return out;
}

tasks::SegMask decode_pbm(const std::vector<std::uint8_t>& bytes, const std::string& context) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() {
    skip_ws();
    long v = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && v < 1'000'000) v = v * 10 + (bytes[pos++] - '0');
    if (pos == start) throw SchemaError(context + ": malformed PBM header");
    return static_cast<int>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '4') throw SchemaError(context + ": not a P4 PBM");
  pos = 2;
  const int w = read_int();
  const int h = read_int();
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw SchemaError(context + ": malformed PBM header");
  ++pos;
  if (w <= 0 || h <= 0) throw SchemaError(context + ": PBM has no pixels");
  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  if (bytes.size() - pos < row_bytes * h) throw SchemaError(context + ": truncated PBM");
  tasks::SegMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      m.set(x, y, bytes[pos + y * row_bytes + x / 8] & (0x80 >> (x % 8)));
  return m;
}

namespace {

struct RejectError {
  std::string reason;
  std::string detail;
};

[[noreturn]] void reject(std::string reason, std::string detail) {
  throw RejectError{std::move(reason), std::move(detail)};
}

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) reject("schema", std::string(what) + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) reject("non-finite", std::string(what) + " is not finite");
  return v;
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) reject("schema", std::string("missing '") + key + "'");
  return j.at(key);
}

Payload parse_payload(Task task, const json& p, const fs::path& base) {
  switch (task) {
    case Task::kYoN:
      return tasks::LogitPair{finite_number(member(p, "yes"), "yes"), finite_number(member(p, "no"), "no")};
    case Task::kMCQ: {
      const json& l = member(p, "logits");
      if (!l.is_array()) reject("schema", "logits is not an array");
      if (l.size() != 4) reject("arity", "expected 4 logits, got " + std::to_string(l.size()));
      tasks::LogitQuad q{};
      for (int i = 0; i < 4; ++i) q[i] = finite_number(l[i], "logit");
      return q;
    }
    case Task::kVQA:
    case Task::kCAP: {
      const json& t = member(p, "text");
      if (!t.is_string()) reject("schema", "text is not a string");
      if (tasks::tokenize(t.get<std::string>()).empty()) reject("empty-text", "text is empty after normalization");
      return TextPayload{t.get<std::string>()};
    }
    case Task::kSEG: {
      const json& mp = member(p, "mask");
      const json& hp = member(p, "sha256");
      if (!mp.is_string() || !hp.is_string()) reject("schema", "mask and sha256 must be strings");
      const fs::path file = base / mp.get<std::string>();
      std::string bytes;
      try {
        bytes = read_file(file);
      } catch (const MissingInput&) {
        reject("mask-missing", file.string());
      }
      if (sha256_hex(bytes) != hp.get<std::string>()) reject("mask-hash", file.string());
      try {
        return decode_pbm(std::vector<std::uint8_t>(bytes.begin(), bytes.end()), file.string());
      } catch (const SchemaError& e) {
        reject("mask-format", e.what());
      }
    }
    case Task::kDET: {
      const json& d = member(p, "detections");
      if (!d.is_array()) reject("schema", "detections is not an array");
      tasks::DetectionSet out;
      for (const auto& e : d) {
        tasks::Detection det;
        const json& c = member(e, "category");
        if (!c.is_number_integer()) reject("schema", "category is not an integer");
        det.category = c.get<int>();
        det.confidence = finite_number(member(e, "confidence"), "confidence");
        const json& b = member(e, "box");
        if (!b.is_array() || b.size() != 4) reject("arity", "box needs 4 numbers");
        det.box = {finite_number(b[0], "box"), finite_number(b[1], "box"), finite_number(b[2], "box"),
                   finite_number(b[3], "box")};
        out.push_back(det);
      }
      try {
        tasks::validate_detections(out);
      } catch (const InvalidInput& e) {
        reject("invalid-payload", e.what());
      }
      return out;
    }
    case Task::kRET: {
      const json& r = member(p, "ranking");
      if (!r.is_array()) reject("schema", "ranking is not an array");
      tasks::RetrievalRanking out;
      for (const auto& e : r) {
        if (!e.is_number_integer()) reject("schema", "ranking entry is not an integer");
        out.push_back(e.get<int>());
      }
      try {
        tasks::validate_ranking(out);
      } catch (const InvalidInput& e) {
        reject("invalid-payload", e.what());
      }
      return out;
    }
  }
  reject("schema", "unknown task");
}

}  // namespace

ResponseSet load_responses(const fs::path& path, const LoadOptions& opts) {
  const std::string text = read_file(path);
  const fs::path base = path.parent_path();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  ResponseSet set;
  std::set<std::tuple<std::string, std::string, Task>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      if (!header_seen) throw SchemaError(path.string() + ": header is not JSON");
      set.rejects.push_back({lineno, "parse", e.what()});
      continue;
    }
    if (!header_seen) {
      if (j.value("schema", "") != "mpd.responses" || j.value("version", 0) != kResponsesVersion) {
        throw SchemaError(path.string() + ": missing or unsupported responses header");
      }
      header_seen = true;
      continue;
    }
    try {
      ResponseRecord r;
      const json& id = member(j, "image_id");
      const json& sub = member(j, "subject");
      const json& task = member(j, "task");
      if (!id.is_string() || !sub.is_string() || !task.is_string()) reject("schema", "ids must be strings");
      r.image_id = id.get<std::string>();
      r.subject = sub.get<std::string>();
      if (r.image_id.empty() || r.subject.empty()) reject("schema", "empty id");
      const auto t = tasks::parse_task(task.get<std::string>());
      if (!t) reject("unknown-task", task.get<std::string>());
      r.task = *t;
      if (opts.roster) {
        if (!opts.roster->find(r.subject)) reject("unknown-subject", r.subject);
        if (!opts.roster->covers(r.subject, r.task)) {
          reject("task-not-covered", r.subject + " does not cover " + task.get<std::string>());
        }
      }
      r.temperature = j.contains("temperature") ? finite_number(j["temperature"], "temperature") : 0.0;
      if (tasks::dimension_of(r.task) != tasks::Dimension::kOthers && r.temperature != 0.0) {
        reject("temperature", "LMM responses must be decoded at temperature 0");
      }
      r.payload = parse_payload(r.task, member(j, "payload"), base);
      if (!seen.insert({r.image_id, r.subject, r.task}).second) {
        reject("duplicate", r.image_id + "/" + r.subject + "/" + task.get<std::string>());
      }
      set.records.push_back(std::move(r));
    } catch (const RejectError& e) {
      set.rejects.push_back({lineno, e.reason, e.detail});
    }
  }
  if (!header_seen) throw SchemaError(path.string() + ": empty responses file");
  const double total = static_cast<double>(set.records.size() + set.rejects.size());
  if (total > 0 && static_cast<double>(set.rejects.size()) / total > opts.max_reject_fraction) {
    std::string msg = path.string() + ": " + std::to_string(set.rejects.size()) + " of " +
                      std::to_string(static_cast<long>(total)) + " records rejected";
    for (std::size_t i = 0; i < set.rejects.size() && i < 5; ++i) {
      msg += "; line " + std::to_string(set.rejects[i].line) + " " + set.rejects[i].reason + ": " +
             set.rejects[i].detail;
    }
    throw SchemaError(msg);
  }
  set.rebuild_index();
  return set;
}

namespace {

json payload_json(const ResponseRecord& r, std::size_t index, const fs::path& dir, std::string& mask_blob_name,
                  std::vector<std::uint8_t>& mask_bytes) {
  return std::visit(
      [&](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, tasks::LogitPair>) {
          return {{"yes", p.yes}, {"no", p.no}};
        } else if constexpr (std::is_same_v<T, tasks::LogitQuad>) {
          return {{"logits", p}};
        } else if constexpr (std::is_same_v<T, TextPayload>) {
          return {{"text", p.text}};
        } else if constexpr (std::is_same_v<T, tasks::SegMask>) {
          (void)dir;
          mask_blob_name = "masks/" + std::to_string(index) + ".pbm";
          mask_bytes = encode_pbm(p);
          return {{"mask", mask_blob_name},
                  {"sha256", sha256_hex(std::span<const std::uint8_t>(mask_bytes))}};
        } else if constexpr (std::is_same_v<T, tasks::DetectionSet>) {
          json arr = json::array();
          for (const auto& d : p) {
            arr.push_back({{"category", d.category},
                           {"confidence", d.confidence},
                           {"box", {d.box.x0, d.box.y0, d.box.x1, d.box.y1}}});
          }
          return {{"detections", arr}};
        } else {
          return {{"ranking", p}};
        }
      },
      r.payload);
}

}  // namespace

void write_responses(const fs::path& path, const std::vector<ResponseRecord>& records) {
  const fs::path dir = path.parent_path();
  std::string text = json{{"schema", "mpd.responses"}, {"version", kResponsesVersion}}.dump() + "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::string mask_name;
    std::vector<std::uint8_t> mask_bytes;
    json j = {{"image_id", r.image_id},
              {"subject", r.subject},
              {"task", tasks::task_name(r.task)},
              {"temperature", r.temperature}};
    j["payload"] = payload_json(r, i, dir, mask_name, mask_bytes);
    if (!mask_name.empty()) {
      write_file(dir / mask_name, std::string_view(reinterpret_cast<const char*>(mask_bytes.data()),
                                                   mask_bytes.size()));
    }
    text += j.dump() + "\n";
  }
  write_file(path, text);
}

}  // namespace mpd::ingest
