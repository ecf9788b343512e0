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

#include "tzplc/runtime/io.h"

#include <algorithm>

namespace tzplc::runtime {

struct SlaveLinks::Link {
  SlaveBinding binding;
  std::unique_ptr<net::ByteStream> stream;
  std::unique_ptr<modbus::Client> client;
  // Last known value per map entry (sensors only).
  std::vector<std::uint16_t> last;
};

SlaveLinks::SlaveLinks(std::vector<SlaveBinding> bindings, LinkOpener opener,
                       Duration timeout, Instrumentation* instrumentation, bool secure_socket)
    : opener_(std::move(opener)),
      timeout_(timeout),
      instrumentation_(instrumentation),
      secure_socket_(secure_socket) {
  for (auto& b : bindings) {
    auto link = std::make_unique<Link>();
    link->last.assign(b.map.size(), 0);
    link->binding = std::move(b);
    links_.push_back(std::move(link));
  }
}

SlaveLinks::~SlaveLinks() { close(); }

void SlaveLinks::connect_all() {
  for (auto& l : links_) ensure_open(*l);
}

bool SlaveLinks::ensure_open(Link& link) {
  if (link.stream) return true;
  try {
    link.stream = opener_(link.binding, timeout_);
    ++opens_;
  } catch (const Error& e) {
    events_.push_back({link.binding.name, e.what()});
    return false;
  }
  link.client = std::make_unique<modbus::Client>(
      *link.stream,
      modbus::ClientOptions{link.binding.unit, timeout_, instrumentation_, secure_socket_});
  return true;
}

void SlaveLinks::drop(Link& link, const std::exception& e) {
  events_.push_back({link.binding.name, e.what()});
  link.client.reset();
  if (link.stream) {
    link.stream->close();
    link.stream.reset();
  }
}

void SlaveLinks::read_link(Link& link) {
  const auto& map = link.binding.map;
  for (auto width : {logic::IoWidth::kBit, logic::IoWidth::kWord}) {
    std::uint16_t lo = UINT16_MAX;
    std::uint16_t hi = 0;
    for (const auto& p : map) {
      if (p.local.width != width) continue;
      lo = std::min(lo, p.remote);
      hi = std::max(hi, p.remote);
    }
    if (lo > hi) continue;
    auto count = static_cast<std::uint16_t>(hi - lo + 1);
    if (width == logic::IoWidth::kBit) {
      auto bits = link.client->read_coils(lo, count);
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i].local.width == width) link.last[i] = bits[map[i].remote - lo] ? 1 : 0;
      }
    } else {
      auto words = link.client->read_holding_registers(lo, count);
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i].local.width == width) link.last[i] = words[map[i].remote - lo];
      }
    }
  }
}

bool SlaveLinks::read_inputs(logic::ProcessImage& image) {
  bool stale = false;
  for (auto& l : links_) {
    if (l->binding.role != BindingRole::kSensor) continue;
    if (!ensure_open(*l)) {
      stale = true;
    } else {
      try {
        read_link(*l);
      } catch (const Error& e) {
        drop(*l, e);
        stale = true;
      }
    }
    const auto& map = l->binding.map;
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (map[i].local.width == logic::IoWidth::kBit) {
        image.input_bits.at(map[i].local.index) = l->last[i] != 0;
      } else {
        image.input_words.at(map[i].local.index) = l->last[i];
      }
    }
  }
  return stale;
}

void SlaveLinks::write_link(Link& link, const logic::ProcessImage& image) {
  for (const auto& p : link.binding.map) {
    if (p.local.width == logic::IoWidth::kBit) {
      link.client->write_single_coil(p.remote, image.output_bits.at(p.local.index));
    } else {
      link.client->write_single_register(p.remote, image.output_words.at(p.local.index));
    }
  }
}

std::uint32_t SlaveLinks::write_outputs(const logic::ProcessImage& image) {
  std::uint32_t failed = 0;
  for (auto& l : links_) {
    if (l->binding.role != BindingRole::kActuator) continue;
    if (!ensure_open(*l)) {
      ++failed;
      continue;
    }
    try {
      write_link(*l, image);
    } catch (const Error& e) {
      drop(*l, e);
      ++failed;
    }
  }
  return failed;
}

void SlaveLinks::close() {
  for (auto& l : links_) {
    l->client.reset();
    if (l->stream) {
      l->stream->close();
      l->stream.reset();
    }
  }
}

}  // namespace tzplc::runtime
