// Copyright 2026 The tzplc Authors
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

#ifndef TZPLC_LOGIC_IMAGE_H_
#define TZPLC_LOGIC_IMAGE_H_

#include <cstdint>
#include <vector>

#include "tzplc/common/bytes.h"

namespace tzplc::logic {

struct ImageShape {
  std::uint16_t input_bits = 0;
  std::uint16_t output_bits = 0;
  std::uint16_t input_words = 0;
  std::uint16_t output_words = 0;

  bool operator==(const ImageShape&) const = default;
};

// The PLC's I/O memory. Bits are %IX/%QX (byte.bit flattened to byte*8+bit),
// words are %IW/%QW.
struct ProcessImage {
  std::vector<bool> input_bits;
  std::vector<bool> output_bits;
  std::vector<std::uint16_t> input_words;
  std::vector<std::uint16_t> output_words;

  static ProcessImage zeros(const ImageShape& shape);
  ImageShape shape() const;
  bool operator==(const ProcessImage&) const = default;
};

// Compact wire form used for invoke parameters and snapshots: the four
// sizes as u16, then packed input bits, packed output bits, input words,
// output words (all big-endian).
Bytes encode_image(const ProcessImage& image);
// Throws std::invalid_argument on malformed input.
ProcessImage decode_image(ByteSpan bytes);

// Only the input or only the output half, same layout with the other half's
// sizes set to zero.
Bytes encode_inputs(const ProcessImage& image);
Bytes encode_outputs(const ProcessImage& image);

}  // namespace tzplc::logic

#endif  // TZPLC_LOGIC_IMAGE_H_
