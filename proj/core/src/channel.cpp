// Copyright 2026 The GBSED Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gbsed/channel.hpp"

#include <array>
#include <cmath>

#include "gbsed/errors.hpp"
#include "gbsed/random.hpp"

namespace gbsed {

namespace {

// Indexed by the 3-bit group value b0b1b2.
constexpr std::array<int, 8> kGrayLevel{-7, -5, -1, -3, +7, +5, +1, +3};

// Indexed by (level + 7) / 2.
constexpr std::array<std::uint8_t, 8> kLevelBits{0b000, 0b001, 0b011, 0b010,
                                                 0b110, 0b111, 0b101, 0b100};

const double kScale = 1.0 / std::sqrt(42.0);
const double kUnscale = std::sqrt(42.0);

}  // namespace

void LinkConfig::validate() const {
  if (!(bsc_flip_prob >= 0.0 && bsc_flip_prob <= 0.5))
    throw SpecError("bsc flip probability must lie in [0, 0.5]");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw SpecError("snr must be finite or +inf");
}

std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> octets) {
  std::vector<std::uint8_t> bits;
  bits.reserve(octets.size() * 8);
  for (const auto octet : octets)
    for (int shift = 7; shift >= 0; --shift) bits.push_back((octet >> shift) & 1u);
  return bits;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> octets((bits.size() + 7) / 8, 0);
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k] & 1u) octets[k / 8] |= static_cast<std::uint8_t>(0x80u >> (k % 8));
  return octets;
}

QamFrame qam64_map(std::span<const std::uint8_t> bits) {
  QamFrame frame;
  frame.pad_bits = (6 - bits.size() % 6) % 6;
  const std::size_t count = (bits.size() + frame.pad_bits) / 6;
  frame.symbols.reserve(count);
  const auto bit_at = [&](std::size_t k) -> unsigned {
    return k < bits.size() ? (bits[k] & 1u) : 0u;
  };
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t base = s * 6;
    const unsigned i_group = (bit_at(base) << 2) | (bit_at(base + 1) << 1) | bit_at(base + 2);
    const unsigned q_group = (bit_at(base + 3) << 2) | (bit_at(base + 4) << 1) | bit_at(base + 5);
    frame.symbols.emplace_back(kGrayLevel[i_group] * kScale, kGrayLevel[q_group] * kScale);
  }
  return frame;
}

int qam64_decide_level(double scaled) noexcept {
  // Candidates in order of increasing magnitude so a strict comparison
  // resolves ties toward the smaller-magnitude level.
  constexpr std::array<int, 8> kByMagnitude{1, -1, 3, -3, 5, -5, 7, -7};
  int best = kByMagnitude[0];
  double best_distance = std::abs(scaled - best);
  for (const int level : kByMagnitude) {
    const double distance = std::abs(scaled - level);
    if (distance < best_distance) {
      best = level;
      best_distance = distance;
    }
  }
  return best;
}

std::vector<std::uint8_t> qam64_demap(std::span<const Symbol> symbols, std::size_t pad_bits) {
  std::vector<std::uint8_t> bits;
  bits.reserve(symbols.size() * 6);
  const auto push_group = [&](double axis) {
    const std::uint8_t group = kLevelBits[(qam64_decide_level(axis * kUnscale) + 7) / 2];
    bits.push_back((group >> 2) & 1u);
    bits.push_back((group >> 1) & 1u);
    bits.push_back(group & 1u);
  };
  for (const auto& s : symbols) {
    push_group(s.real());
    push_group(s.imag());
  }
  bits.resize(bits.size() - std::min(pad_bits, bits.size()));
  return bits;
}

std::vector<Symbol> awgn(std::span<const Symbol> symbols, double snr_db, std::uint64_t seed) {
  std::vector<Symbol> out(symbols.begin(), symbols.end());
  if (snr_db == kNoiseless) return out;
  const double n0 = std::pow(10.0, -snr_db / 10.0);
  const double sigma = std::sqrt(n0 / 2.0);
  SplitMix64 rng(seed);
  for (auto& s : out) {
    const auto [z0, z1] = rng.gaussian_pair();
    s += Symbol(sigma * z0, sigma * z1);
  }
  return out;
}

std::vector<std::uint8_t> bsc(std::span<const std::uint8_t> bits, double flip_prob,
                              std::uint64_t seed) {
  std::vector<std::uint8_t> out(bits.begin(), bits.end());
  if (flip_prob <= 0.0) return out;
  SplitMix64 rng(seed);
  for (auto& b : out)
    if (rng.uniform() < flip_prob) b ^= 1u;
  return out;
}

TransmitResult transmit(std::span<const std::uint8_t> payload, const LinkConfig& cfg) {
  cfg.validate();
  const std::size_t bypass =
      cfg.protection == HeaderProtection::protected_header ? std::min(kHeaderSize, payload.size()) : 0;
  const auto exposed = payload.subspan(bypass);
  const auto sent_bits = unpack_bits(exposed);

  std::vector<std::uint8_t> received_bits;
  if (cfg.kind == ChannelKind::bsc) {
    received_bits = bsc(sent_bits, cfg.bsc_flip_prob, cfg.seed);
  } else {
    const auto frame = qam64_map(sent_bits);
    received_bits = qam64_demap(awgn(frame.symbols, cfg.snr_db, cfg.seed), frame.pad_bits);
  }

  TransmitResult result;
  for (std::size_t k = 0; k < sent_bits.size(); ++k)
    result.bit_errors += (sent_bits[k] ^ received_bits[k]) & 1u;
  result.received.assign(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>(bypass));
  const auto body = pack_bits(received_bits);
  result.received.insert(result.received.end(), body.begin(), body.end());
  return result;
}

std::size_t frames_required(std::size_t octets, const FrameGrid& grid) {
  const std::size_t capacity = grid.capacity_bits();
  if (capacity == 0) throw SpecError("frame grid has zero capacity");
  return (octets * 8 + capacity - 1) / capacity;
}

}  // namespace gbsed
