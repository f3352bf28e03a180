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

// Single-stream noisy link: Gray-coded square 64-QAM over AWGN with a hard
// nearest-level receiver, or a binary symmetric channel. OFDM grid
// parameters are kept only for frame-capacity accounting.

#ifndef GBSED_CHANNEL_HPP_
#define GBSED_CHANNEL_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gbsed/codec.hpp"

namespace gbsed {

/// snr_db value that disables noise entirely.
inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

enum class ChannelKind { awgn64qam, bsc };
enum class HeaderProtection { protected_header, unprotected_header };

struct LinkConfig {
  double snr_db = kNoiseless;
  ChannelKind kind = ChannelKind::awgn64qam;
  double bsc_flip_prob = 0.0;
  std::uint64_t seed = 0;
  HeaderProtection protection = HeaderProtection::protected_header;

  /// Throws SpecError unless 0 <= bsc_flip_prob <= 0.5 and snr_db is finite
  /// or +inf.
  void validate() const;
};

struct FrameGrid {
  std::size_t subcarriers = 132;
  std::size_t symbols_per_frame = 14;
  std::size_t bits_per_symbol = 6;
  std::size_t streams = 1;

  std::size_t capacity_bits() const noexcept {
    return subcarriers * symbols_per_frame * bits_per_symbol * streams;
  }
};

using Symbol = std::complex<double>;

/// One bit per element, most significant bit of each octet first.
std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> octets);
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);

struct QamFrame {
  std::vector<Symbol> symbols;
  std::size_t pad_bits = 0;
};

/// Zero-pads the tail to a multiple of 6 bits. Bits b0 b1 b2 select the
/// in-phase level and b3 b4 b5 the quadrature level through the per-axis
/// Gray map 000:-7 001:-5 011:-3 010:-1 110:+1 111:+3 101:+5 100:+7, scaled
/// by 1/sqrt(42).
QamFrame qam64_map(std::span<const std::uint8_t> bits);

/// Nearest odd level in [-7, 7] to an unscaled axis value. Ties go to the
/// level of smaller magnitude; at exactly 0 the result is +1.
int qam64_decide_level(double scaled) noexcept;

/// Hard per-axis decision, inverse Gray map, then drops `pad_bits` tail bits.
std::vector<std::uint8_t> qam64_demap(std::span<const Symbol> symbols, std::size_t pad_bits);

/// Adds complex Gaussian noise with per-component variance N0/2, where
/// N0 = 10^(-snr_db/10) relative to unit symbol energy. The noise stream is
/// splitmix64(seed) through Box-Muller, one draw pair per symbol.
std::vector<Symbol> awgn(std::span<const Symbol> symbols, double snr_db, std::uint64_t seed);

/// Flips each bit independently with probability `flip_prob`.
std::vector<std::uint8_t> bsc(std::span<const std::uint8_t> bits, double flip_prob,
                              std::uint64_t seed);

struct TransmitResult {
  Payload received;
  std::size_t bit_errors = 0;
};

/// Sends `payload` through the configured channel. With protected headers
/// the first kHeaderSize octets bypass the channel.
TransmitResult transmit(std::span<const std::uint8_t> payload, const LinkConfig& cfg);

/// ceil(8 * octets / grid.capacity_bits()).
std::size_t frames_required(std::size_t octets, const FrameGrid& grid = {});

}  // namespace gbsed

#endif  // GBSED_CHANNEL_HPP_
