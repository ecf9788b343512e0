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

#ifndef TZPLC_RUNTIME_IO_H_
#define TZPLC_RUNTIME_IO_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tzplc/common/cycle_report.h"
#include "tzplc/logic/image.h"
#include "tzplc/modbus/client.h"
#include "tzplc/runtime/config.h"

namespace tzplc::runtime {

// Opens the byte stream a binding's Modbus client talks over (plain TCP, or
// TCP plus a completed secure handshake).
using LinkOpener =
    std::function<std::unique_ptr<net::ByteStream>(const SlaveBinding&, Duration timeout)>;

struct LinkEvent {
  std::string slave;
  std::string error;  // "<Name>: detail" as produced by tzplc::Error
};

// The scan cycle's slave I/O. Sensors are read and actuators written
// strictly one binding after another, in configuration order. A failed
// link is dropped and reopened on the next cycle; its sensor points keep
// their last known values meanwhile.
class SlaveLinks {
 public:
  SlaveLinks(std::vector<SlaveBinding> bindings, LinkOpener opener, Duration timeout,
             Instrumentation* instrumentation = nullptr, bool secure_socket = false);
  ~SlaveLinks();

  // Best effort; links that fail stay closed until their next use.
  void connect_all();

  // Fills the input half of `image`. Returns true when any sensor failed,
  // i.e. some inputs are stale.
  bool read_inputs(logic::ProcessImage& image);
  // Returns the number of actuator bindings whose write failed.
  std::uint32_t write_outputs(const logic::ProcessImage& image);

  void close();

  const std::vector<LinkEvent>& events() const { return events_; }
  std::uint64_t opens() const { return opens_; }

 private:
  struct Link;

  bool ensure_open(Link& link);
  void drop(Link& link, const std::exception& e);
  void read_link(Link& link);
  void write_link(Link& link, const logic::ProcessImage& image);

  std::vector<std::unique_ptr<Link>> links_;
  LinkOpener opener_;
  Duration timeout_;
  Instrumentation* instrumentation_;
  bool secure_socket_;
  std::vector<LinkEvent> events_;
  std::uint64_t opens_ = 0;
};

}  // namespace tzplc::runtime

#endif  // TZPLC_RUNTIME_IO_H_
