// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpd/common/error.hpp"

namespace mpd::stats {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("correlation inputs differ in length");
  if (x.size() < 3) throw InvalidInput("correlation needs at least 3 samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InvalidInput("correlation input is not finite");
  }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i + 1;
    while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
    i = j;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw UndefinedCorrelation("correlation with a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double srcc(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

namespace {

// Sorts v in place and returns the number of inversions.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
  return swaps;
}

// Sum over tie groups of t(t-1)/2 for a sorted sequence.
template <typename Eq>
std::uint64_t tie_pairs(std::size_t n, Eq eq) {
  std::uint64_t total = 0, run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (eq(i - 1, i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total + run * (run - 1) / 2;
}

}  // namespace

double krcc(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });
  const std::uint64_t n1 = tie_pairs(n, [&](auto a, auto b) { return x[idx[a]] == x[idx[b]]; });
  const std::uint64_t n3 = tie_pairs(n, [&](auto a, auto b) {
    return x[idx[a]] == x[idx[b]] && y[idx[a]] == y[idx[b]];
  });
  std::vector<double> ys(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  const std::uint64_t swaps = merge_count(ys, tmp, 0, n);
  const std::uint64_t n2 = tie_pairs(n, [&](auto a, auto b) { return ys[a] == ys[b]; });
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double dx = n0 - static_cast<double>(n1);
  const double dy = n0 - static_cast<double>(n2);
  if (dx == 0 || dy == 0) throw UndefinedCorrelation("rank correlation with a constant vector");
  const double num = n0 - static_cast<double>(n1) - static_cast<double>(n2) + static_cast<double>(n3) -
                     2.0 * static_cast<double>(swaps);
  return std::clamp(num / std::sqrt(dx * dy), -1.0, 1.0);
}

double LogisticParams::operator()(double x) const {
  const double s = std::max(std::abs(beta[3]), 1e-12);
  return beta[1] + (beta[0] - beta[1]) / (1.0 + std::exp(-(x - beta[2]) / s));
}

namespace {

// Solves a 4x4 system in place by Gaussian elimination with partial pivoting.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4>& b) {
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < 4; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int c = 3; c >= 0; --c) {
    for (int k = c + 1; k < 4; ++k) b[c] -= a[c][k] * b[k];
    b[c] /= a[c][c];
  }
  return true;
}

double sse_of(const LogisticParams& p, std::span<const double> x, std::span<const double> y) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - p(x[i]);
    s += r * r;
  }
  return s;
}

}  // namespace

LogisticFit fit_logistic(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double vx = 0;
  for (double v : x) vx += (v - mx) * (v - mx);
  const double sx = std::sqrt(vx / n);
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());

  LogisticFit fit;
  fit.params.beta = {*ymax, *ymin, mx, sx > 0 ? sx : 1.0};
  if (pearson(x, y) < 0) std::swap(fit.params.beta[0], fit.params.beta[1]);
  double sse = sse_of(fit.params, x, y);
  double lambda = 1e-3;
  for (int iter = 0; iter < 500; ++iter) {
    std::array<std::array<double, 4>, 4> jtj{};
    std::array<double, 4> jtr{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::array<double, 4> g{};
      for (int k = 0; k < 4; ++k) {
        LogisticParams hi = fit.params, lo = fit.params;
        const double h = 1e-6 * std::max(1.0, std::abs(fit.params.beta[k]));
        hi.beta[k] += h;
        lo.beta[k] -= h;
        g[k] = (hi(x[i]) - lo(x[i])) / (2 * h);
      }
      const double r = y[i] - fit.params(x[i]);
      for (int a = 0; a < 4; ++a) {
        jtr[a] += g[a] * r;
        for (int b = 0; b < 4; ++b) jtj[a][b] += g[a] * g[b];
      }
    }
    bool improved = false;
    while (lambda < 1e12) {
      auto a = jtj;
      for (int k = 0; k < 4; ++k) a[k][k] += lambda * std::max(jtj[k][k], 1e-12);
      std::array<double, 4> step = jtr;
      if (!solve4(a, step)) {
        lambda *= 10;
        continue;
      }
      LogisticParams cand = fit.params;
      for (int k = 0; k < 4; ++k) cand.beta[k] += step[k];
      const double cs = sse_of(cand, x, y);
      if (std::isfinite(cs) && cs < sse) {
        const double rel = (sse - cs) / std::max(sse, 1e-300);
        fit.params = cand;
        sse = cs;
        lambda = std::max(lambda / 10, 1e-12);
        improved = true;
        if (rel < 1e-12) {
          fit.converged = true;
          fit.sse = sse;
          return fit;
        }
        break;
      }
      lambda *= 10;
    }
    if (!improved) {
      // No step reduces the error further: a stationary point.
      fit.converged = std::isfinite(sse);
      break;
    }
  }
  fit.sse = sse;
  return fit;
}

PlccResult plcc(std::span<const double> x, std::span<const double> y, bool logistic) {
  PlccResult out;
  out.raw = pearson(x, y);
  if (!logistic) return out;
  const LogisticFit fit = fit_logistic(x, y);
  if (!fit.converged) {
    out.fallback = true;
    return out;
  }
  std::vector<double> mapped(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mapped[i] = fit.params(x[i]);
  try {
    out.logistic = pearson(mapped, y);
    out.params = fit.params;
  } catch (const UndefinedCorrelation&) {
    out.fallback = true;
  }
  return out;
}

}  // namespace mpd::stats
