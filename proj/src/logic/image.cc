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

#include "tzplc/logic/image.h"

#include <stdexcept>

namespace tzplc::logic {

namespace {

void put_bits(Bytes& out, const std::vector<bool>& bits) {
  std::size_t start = out.size();
  out.resize(start + (bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[start + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
}

std::vector<bool> get_bits(ByteSpan in, std::size_t& at, std::size_t count) {
  std::size_t n = (count + 7) / 8;
  if (at + n > in.size()) throw std::invalid_argument("image truncated");
  std::vector<bool> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = (in[at + i / 8] >> (i % 8)) & 1;
  at += n;
  return bits;
}

std::vector<std::uint16_t> get_words(ByteSpan in, std::size_t& at, std::size_t count) {
  if (at + 2 * count > in.size()) throw std::invalid_argument("image truncated");
  std::vector<std::uint16_t> words(count);
  for (std::size_t i = 0; i < count; ++i, at += 2) words[i] = get_u16(in, at);
  return words;
}

}  // namespace

ProcessImage ProcessImage::zeros(const ImageShape& shape) {
  return {std::vector<bool>(shape.input_bits), std::vector<bool>(shape.output_bits),
          std::vector<std::uint16_t>(shape.input_words),
          std::vector<std::uint16_t>(shape.output_words)};
}

ImageShape ProcessImage::shape() const {
  return {static_cast<std::uint16_t>(input_bits.size()),
          static_cast<std::uint16_t>(output_bits.size()),
          static_cast<std::uint16_t>(input_words.size()),
          static_cast<std::uint16_t>(output_words.size())};
}

Bytes encode_image(const ProcessImage& image) {
  Bytes out;
  ImageShape s = image.shape();
  put_u16(out, s.input_bits);
  put_u16(out, s.output_bits);
  put_u16(out, s.input_words);
  put_u16(out, s.output_words);
  put_bits(out, image.input_bits);
  put_bits(out, image.output_bits);
  for (auto w : image.input_words) put_u16(out, w);
  for (auto w : image.output_words) put_u16(out, w);
  return out;
}

ProcessImage decode_image(ByteSpan bytes) {
  if (bytes.size() < 8) throw std::invalid_argument("image header truncated");
  std::size_t at = 8;
  ProcessImage image;
  image.input_bits = get_bits(bytes, at, get_u16(bytes, 0));
  image.output_bits = get_bits(bytes, at, get_u16(bytes, 2));
  image.input_words = get_words(bytes, at, get_u16(bytes, 4));
  image.output_words = get_words(bytes, at, get_u16(bytes, 6));
  if (at != bytes.size()) throw std::invalid_argument("trailing bytes after image");
  return image;
}

Bytes encode_inputs(const ProcessImage& image) {
  return encode_image({image.input_bits, {}, image.input_words, {}});
}

Bytes encode_outputs(const ProcessImage& image) {
  return encode_image({{}, image.output_bits, {}, image.output_words});
}

}  // namespace tzplc::logic
