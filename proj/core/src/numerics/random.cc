/*
 * Copyright 2026 The lrhte Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lrhte/numerics/random.h"

#include <cmath>
#include <numbers>
#include <string>

#include "lrhte/error.h"

namespace lrhte::numerics {
namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::uint64_t MixBits(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::NextU64() {
  ++counter_;
  return MixBits(seed_ + counter_ * kGoldenGamma);
}

double RngStream::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RngStream::StdNormal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - Uniform01();
  const double u2 = Uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

bool RngStream::Bernoulli(double p) { return Uniform01() < p; }

std::size_t RngStream::UniformIndex(std::size_t n) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "UniformIndex over empty range");
  }
  // Lemire's nearly-divisionless bounded draw.
  __extension__ using U128 = unsigned __int128;
  const std::uint64_t range = n;
  U128 product = static_cast<U128>(NextU64()) * range;
  auto low = static_cast<std::uint64_t>(product);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      product = static_cast<U128>(NextU64()) * range;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::size_t>(product >> 64);
}

RngStream RngStream::Derive(std::uint64_t tag) const {
  return RngStream(MixBits(seed_ ^ MixBits(tag + kGoldenGamma)));
}

std::vector<double> Draws(RngStream& stream, DrawKind kind, std::size_t count,
                          double p) {
  if (kind == DrawKind::kBernoulli && !(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bernoulli probability " + std::to_string(p) +
                    " outside [0, 1]");
  }
  std::vector<double> out(count);
  for (auto& v : out) {
    switch (kind) {
      case DrawKind::kStdNormal:
        v = stream.StdNormal();
        break;
      case DrawKind::kUniform01:
        v = stream.Uniform01();
        break;
      case DrawKind::kBernoulli:
        v = stream.Bernoulli(p) ? 1.0 : 0.0;
        break;
    }
  }
  return out;
}

Matrix NormalMatrix(RngStream& stream, std::size_t rows, std::size_t cols,
                    double sd) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = sd * stream.StdNormal();
  return m;
}

}  // namespace lrhte::numerics
