// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/aggregate/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpd/common/error.hpp"
#include "mpd/stats/correlation.hpp"

namespace mpd::aggregate {

std::string AgreementScope::name() const {
  switch (kind) {
    case Kind::kDimension: return std::string(tasks::dimension_name(dimension));
    case Kind::kTask: return std::string(tasks::task_name(task));
    case Kind::kOverall: return "overall";
  }
  return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::uint32_t> sorted_by_name(const SubjectScoreTable& t, std::vector<std::uint32_t> ids) {
  std::sort(ids.begin(), ids.end(),
            [&](auto a, auto b) { return t.subjects().name(a) < t.subjects().name(b); });
  return ids;
}

}  // namespace

AgreementMatrix subject_agreement(const SubjectScoreTable& table, const AgreementScope& scope,
                                  const NormalizationParams* params) {
  const std::size_t npairs = table.pairs().size();
  const std::size_t nsub_total = table.subjects().size();
  // value[pair][subject], NaN when absent or excluded.
  std::vector<double> grid(npairs * nsub_total, kNaN);
  for (const auto& r : table.rows()) {
    if (r.excluded) continue;
    double v = orient(r.task, r.value);
    if (scope.kind == AgreementScope::Kind::kOverall) {
      if (!params) throw InvalidInput("overall agreement needs normalization parameters");
      v = params->normalize(r.task, v);
    }
    grid[r.pair * nsub_total + r.subject] = v;
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::vector<std::uint32_t>> members;  // per column: subjects summed
  if (scope.kind == AgreementScope::Kind::kOverall) {
    std::vector<std::vector<std::uint32_t>> per_dim;
    std::size_t slots = std::numeric_limits<std::size_t>::max();
    for (auto d : tasks::all_dimensions()) {
      per_dim.push_back(sorted_by_name(table, table.subjects_in(d)));
      slots = std::min(slots, per_dim.back().size());
    }
    for (std::size_t k = 0; k < slots; ++k) {
      std::vector<std::uint32_t> m;
      for (const auto& dim : per_dim) m.push_back(dim[k]);
      members.push_back(std::move(m));
      names.push_back("slot" + std::to_string(k + 1));
    }
  } else {
    const auto subs = scope.kind == AgreementScope::Kind::kDimension
                          ? table.subjects_in(scope.dimension)
                          : table.subjects_for_task(scope.task);
    for (auto s : sorted_by_name(table, subs)) {
      members.push_back({s});
      names.push_back(table.subjects().name(s));
    }
  }
  if (members.size() < 2) throw InvalidInput("agreement needs at least 2 subjects");

  columns.assign(members.size(), {});
  for (std::size_t p = 0; p < npairs; ++p) {
    std::vector<double> row(members.size(), 0.0);
    bool complete = true;
    for (std::size_t c = 0; c < members.size() && complete; ++c) {
      for (auto s : members[c]) {
        const double v = grid[p * nsub_total + s];
        if (std::isnan(v)) {
          complete = false;
          break;
        }
        row[c] += v;
      }
    }
    if (!complete) continue;
    for (std::size_t c = 0; c < members.size(); ++c) columns[c].push_back(row[c]);
  }

  AgreementMatrix m;
  m.subjects = names;
  m.pairs_used = columns.front().size();
  if (m.pairs_used < 3) throw InvalidInput("agreement needs at least 3 fully scored pairs");
  const std::size_t n = members.size();
  m.srcc.assign(n * n, kNaN);
  m.undefined.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = std::minmax_element(columns[i].begin(), columns[i].end());
    m.undefined[i] = *lo == *hi;
  }
  double sum = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.undefined[i]) continue;
    m.srcc[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m.undefined[j]) continue;
      const double r = stats::srcc(columns[i], columns[j]);
      m.srcc[i * n + j] = m.srcc[j * n + i] = r;
      sum += r;
      ++count;
    }
  }
  m.mean_off_diagonal = count ? sum / static_cast<double>(count) : kNaN;
  return m;
}

}  // namespace mpd::aggregate
