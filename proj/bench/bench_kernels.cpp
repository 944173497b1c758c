// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP counterparts. Run with
// OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include <map>

#include "mpd/imgcore/color.hpp"
#include "mpd/imgcore/filter.hpp"
#include "mpd/imgcore/reference.hpp"
#include "mpd/imgcore/resize.hpp"
#include "mpd/imgcore/synthetic.hpp"

namespace {

using namespace mpd::imgcore;

const FloatPlane& input(int side) {
  static std::map<int, FloatPlane> cache;
  auto it = cache.find(side);
  if (it == cache.end()) it = cache.emplace(side, to_float(synthetic_image(7, side, side))).first;
  return it->second;
}

void BM_ConvertLab(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(convert(img, ColorSpace::kLab));
}
void BM_ConvertLabSerial(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::convert(img, ColorSpace::kLab));
}

void BM_ConvolveDisk(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  const auto k = Kernel2D::disk(6.0);
  for (auto _ : st) benchmark::DoNotOptimize(convolve(img, k));
}
void BM_ConvolveDiskSerial(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  const auto k = Kernel2D::disk(6.0);
  for (auto _ : st) benchmark::DoNotOptimize(reference::convolve(img, k));
}

void BM_ConvolveGaussian(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  const auto k = Kernel2D::gaussian(3.0);
  for (auto _ : st) benchmark::DoNotOptimize(convolve(img, k));
}
void BM_ConvolveGaussianSerial(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  const auto k = Kernel2D::gaussian(3.0);
  for (auto _ : st) benchmark::DoNotOptimize(reference::convolve(img, k));
}

void BM_Bilateral(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bilateral(img, 2.0, 40.0));
}
void BM_BilateralSerial(benchmark::State& st) {
  const auto& img = input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::bilateral(img, 2.0, 40.0));
}

void BM_ResizeBilinear(benchmark::State& st) {
  const int side = static_cast<int>(st.range(0));
  const auto& img = input(side);
  for (auto _ : st) benchmark::DoNotOptimize(resize(img, side * 3 / 2, side * 3 / 2, ResizeMethod::kBilinear));
}
void BM_ResizeBilinearSerial(benchmark::State& st) {
  const int side = static_cast<int>(st.range(0));
  const auto& img = input(side);
  for (auto _ : st) benchmark::DoNotOptimize(reference::resize_bilinear(img, side * 3 / 2, side * 3 / 2));
}

}  // namespace

BENCHMARK(BM_ConvertLab)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvertLabSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveDisk)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveDiskSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveGaussian)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveGaussianSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bilateral)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BilateralSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResizeBilinear)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResizeBilinearSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
