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

#include "tzplc/runtime/ta.h"

#include <optional>

#include <nlohmann/json.hpp>

#include "tzplc/logic/eval.h"
#include "tzplc/runtime/io.h"
#include "tzplc/runtime/snapshot.h"
#include "tzplc/securechan/channel.h"

namespace tzplc::runtime {

using nlohmann::json;
using worldsim::InvokeParams;
using worldsim::Param;
using worldsim::TaContext;

Param cycle_param(std::uint64_t cycle) {
  return Param::value_in(static_cast<std::uint32_t>(cycle),
                         static_cast<std::uint32_t>(cycle >> 32));
}

std::uint64_t cycle_from_param(const Param& p) {
  return (static_cast<std::uint64_t>(p.b) << 32) | p.a;
}

worldsim::TaImage make_ta_image(Mode mode, const TaPayload& payload) {
  logic::compile(payload.program, payload.shape);
  worldsim::TaImage image;
  image.config = {{"program", payload.program},
                  {"shape",
                   {payload.shape.input_bits, payload.shape.output_bits,
                    payload.shape.input_words, payload.shape.output_words}}};
  switch (mode) {
    case Mode::kBaseline:
      throw RuntimeError(RuntimeErrc::kConfigError, "baseline runs without a TA");
    case Mode::kMinimal:
      image.kind = kLogicOnlyKind;
      image.entry_points = {worldsim::entry::kControlLogic};
      break;
    case Mode::kEnhanced:
      if (payload.identity_seed.size() != 32) {
        throw RuntimeError(RuntimeErrc::kConfigError, "enhanced TA needs a 32-byte identity");
      }
      image.kind = kScanCycleKind;
      image.entry_points = {worldsim::entry::kInit, worldsim::entry::kExec,
                            worldsim::entry::kExit};
      image.config["bindings"] = to_json(payload.bindings);
      image.config["identity_seed"] = to_hex(payload.identity_seed);
      image.config["slave_timeout_us"] =
          std::chrono::duration_cast<std::chrono::microseconds>(payload.slave_timeout).count();
      break;
  }
  return image;
}

TaPayload payload_from_image(const worldsim::TaImage& image) {
  TaPayload p;
  const json& c = image.config;
  p.program = c.at("program").get<std::string>();
  auto s = c.at("shape").get<std::vector<std::uint16_t>>();
  p.shape = {s.at(0), s.at(1), s.at(2), s.at(3)};
  if (c.contains("bindings")) p.bindings = bindings_from_json(c["bindings"]);
  if (c.contains("identity_seed")) {
    p.identity_seed = from_hex(c["identity_seed"].get<std::string>());
  }
  if (c.contains("slave_timeout_us")) {
    p.slave_timeout = std::chrono::microseconds(c["slave_timeout_us"].get<std::int64_t>());
  }
  return p;
}

namespace {

PhaseRecorder* recorder_of(const TaContext& ctx) {
  return ctx.instrumentation() ? ctx.instrumentation()->recorder : nullptr;
}

logic::ProcessImage run_logic(TaContext& ctx, const logic::BoundProgram& bound,
                              logic::ProgramState& state, const logic::ProcessImage& in) {
  ScopedPhase phase(recorder_of(ctx), Phase::kLogicExec);
  if (auto* i = ctx.instrumentation()) i->charge_logic();
  return logic::eval_cycle(bound, state, in);
}

void publish(TaContext& ctx, std::uint64_t cycle, const logic::ProcessImage& image) {
  ScopedPhase phase(recorder_of(ctx), Phase::kSnapshotPublish);
  if (auto* i = ctx.instrumentation()) i->charge_snapshot();
  ctx.shm_publish(kSnapshotRegion, encode_snapshot({cycle, ctx.clock().now(), image}));
}

class LogicOnlyTa final : public worldsim::TrustedApp {
 public:
  explicit LogicOnlyTa(const worldsim::TaImage& image)
      : payload_(payload_from_image(image)),
        bound_(logic::compile(payload_.program, payload_.shape)),
        state_(logic::initial_state(bound_)) {}

  void invoke(TaContext& ctx, std::uint32_t entry, InvokeParams& params) override {
    if (entry != worldsim::entry::kControlLogic) {
      throw worldsim::WorldError(worldsim::WorldErrc::kUnknownEntryPoint,
                                 worldsim::entry_name(entry));
    }
    if (params[0].type != worldsim::ParamType::kMemrefIn ||
        params[1].type != worldsim::ParamType::kValueIn ||
        params[2].type != worldsim::ParamType::kMemrefOut) {
      throw worldsim::WorldError(worldsim::WorldErrc::kBadParameter,
                                 "CONTROL_LOGIC parameter types");
    }
    logic::ProcessImage in = logic::decode_image(params[0].buffer);
    if (in.input_bits.size() != payload_.shape.input_bits ||
        in.input_words.size() != payload_.shape.input_words) {
      throw worldsim::WorldError(worldsim::WorldErrc::kBadParameter, "input image shape");
    }
    in.output_bits.assign(payload_.shape.output_bits, false);
    in.output_words.assign(payload_.shape.output_words, 0);
    logic::ProcessImage out = run_logic(ctx, bound_, state_, in);
    params[2].buffer = logic::encode_outputs(out);
    publish(ctx, cycle_from_param(params[1]), out);
  }

 private:
  TaPayload payload_;
  logic::BoundProgram bound_;
  logic::ProgramState state_;
};

class ScanCycleTa final : public worldsim::TrustedApp {
 public:
  explicit ScanCycleTa(const worldsim::TaImage& image)
      : payload_(payload_from_image(image)),
        bound_(logic::compile(payload_.program, payload_.shape)),
        state_(logic::initial_state(bound_)) {}

  void invoke(TaContext& ctx, std::uint32_t entry, InvokeParams& params) override {
    switch (entry) {
      case worldsim::entry::kInit: init(ctx); break;
      case worldsim::entry::kExec: exec(ctx, params); break;
      case worldsim::entry::kExit: exit(); break;
      default:
        throw worldsim::WorldError(worldsim::WorldErrc::kUnknownEntryPoint,
                                   worldsim::entry_name(entry));
    }
  }

  void close(TaContext&) override { exit(); }

 private:
  void init(TaContext& ctx) {
    if (links_) throw std::logic_error("INIT invoked twice");
    if (!ctx.store_contains(kIdentityKey)) ctx.store_put(kIdentityKey, payload_.identity_seed);
    identity_ = securechan::identity_from_seed("plc", ctx.store_get(kIdentityKey));
    // The image copy of the seed is no longer needed once it is stored.
    std::fill(payload_.identity_seed.begin(), payload_.identity_seed.end(), 0);

    auto opener = [this, &ctx](const SlaveBinding& b,
                               Duration timeout) -> std::unique_ptr<net::ByteStream> {
      auto raw = ctx.socket_connect(b.endpoint, timeout);
      if (!is_secure(b, Mode::kEnhanced)) return raw;
      securechan::TrustSet trusted;
      trusted.add({b.name, b.peer_public_key, {}});
      return securechan::connect_secure(std::move(raw), identity_, trusted, timeout,
                                        ctx.instrumentation());
    };
    links_.emplace(payload_.bindings, opener, payload_.slave_timeout, ctx.instrumentation(),
                   true);
    links_->connect_all();
  }

  void exec(TaContext& ctx, InvokeParams& params) {
    if (!links_) throw std::logic_error("EXEC before INIT");
    logic::ProcessImage image = logic::ProcessImage::zeros(payload_.shape);
    bool stale = links_->read_inputs(image);
    image = run_logic(ctx, bound_, state_, image);
    std::uint32_t failed = links_->write_outputs(image);
    publish(ctx, cycle_from_param(params[0]), image);
    params[1] = {worldsim::ParamType::kValueOut, stale ? 1u : 0u, failed, {}};
  }

  void exit() {
    if (links_) links_->close();
    links_.reset();
  }

  TaPayload payload_;
  logic::BoundProgram bound_;
  logic::ProgramState state_;
  securechan::PeerIdentity identity_;
  std::optional<SlaveLinks> links_;
};

}  // namespace

void register_plc_tas(worldsim::WorldSimulator& world) {
  world.register_kind(kLogicOnlyKind, [](const worldsim::TaImage& image) {
    return std::make_unique<LogicOnlyTa>(image);
  });
  world.register_kind(kScanCycleKind, [](const worldsim::TaImage& image) {
    return std::make_unique<ScanCycleTa>(image);
  });
}

}  // namespace tzplc::runtime
