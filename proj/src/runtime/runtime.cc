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

#include "tzplc/runtime/runtime.h"

#include "tzplc/runtime/ta.h"

namespace tzplc::runtime {

namespace {

const Clock& require_clock(const RuntimeEnv& env) {
  if (env.clock == nullptr) throw RuntimeError(RuntimeErrc::kConfigError, "no clock");
  return *env.clock;
}

}  // namespace

Runtime::Runtime(ScanConfig config, Deployment deployment, RuntimeEnv env, RuntimeHooks hooks)
    : config_(std::move(config)),
      deployment_(std::move(deployment)),
      env_(env),
      hooks_(std::move(hooks)),
      recorder_(require_clock(env)) {
  validate(config_);
  shape_ = shape_from_bindings(config_.slaves);
  instrumentation_.clock = env_.clock;
  instrumentation_.recorder = &recorder_;
  instrumentation_.latency = config_.latency;
  if (config_.mode != Mode::kEnhanced && env_.network == nullptr) {
    throw RuntimeError(RuntimeErrc::kConfigError, "no network for normal-world slave I/O");
  }
  if (config_.mode != Mode::kBaseline && env_.world == nullptr) {
    throw RuntimeError(RuntimeErrc::kConfigError,
                       std::string(to_string(config_.mode)) + " mode needs a world simulator");
  }
}

Runtime::~Runtime() {
  try {
    finish();
  } catch (...) {
  }
}

void Runtime::ta_failure(const std::exception& e) {
  if (session_ && env_.world->state(*session_) == worldsim::SessionState::kOpen) {
    try {
      env_.world->close_session(*session_);
    } catch (...) {
    }
  }
  session_.reset();
  throw RuntimeError(RuntimeErrc::kTaFailure, e.what());
}

void Runtime::start() {
  if (config_.mode == Mode::kBaseline) {
    bound_.emplace(logic::compile(deployment_.program_source, shape_));
    state_.emplace(logic::initial_state(*bound_));
  } else {
    shm_ = env_.world->create_shm(kSnapshotRegion, snapshot_size(shape_));
    session_ = env_.world->load_ta(deployment_.manifest);
  }
  if (config_.mode != Mode::kEnhanced) {
    net::Connector* network = env_.network;
    links_ = std::make_unique<SlaveLinks>(
        config_.slaves,
        [network](const SlaveBinding& b, Duration timeout) {
          return network->connect(b.endpoint, timeout);
        },
        config_.slave_timeout, &instrumentation_, false);
    links_->connect_all();
  } else {
    try {
      env_.world->invoke(*session_, worldsim::entry::kInit, {}, &instrumentation_);
    } catch (const worldsim::WorldError& e) {
      ta_failure(e);
    }
  }
  initialized_ = true;
}

void Runtime::finish() {
  if (!initialized_) return;
  initialized_ = false;
  if (links_) links_->close();
  if (session_) {
    if (config_.mode == Mode::kEnhanced &&
        env_.world->state(*session_) == worldsim::SessionState::kOpen) {
      try {
        env_.world->invoke(*session_, worldsim::entry::kExit, {}, &instrumentation_);
      } catch (const worldsim::WorldError&) {
        // The session is closed below either way.
      }
    }
    if (env_.world->state(*session_) == worldsim::SessionState::kOpen) {
      env_.world->close_session(*session_);
    }
    session_.reset();
  }
}

void Runtime::call_hook(const std::function<void(NormalWorldBuffers&)>& hook,
                        const char* name, NormalWorldBuffers& buffers) {
  if (!hook) return;
  {
    std::lock_guard lock(access_mu_);
    accesses_.push_back({buffers.cycle, name, buffers.inputs != nullptr});
  }
  hook(buffers);
}

void Runtime::cycle(std::uint64_t n, CycleReport& report) {
  NormalWorldBuffers buffers;
  buffers.cycle = n;
  buffers.shm = shm_.get();
  buffers.board = config_.mode == Mode::kBaseline ? &board_ : nullptr;

  if (config_.mode == Mode::kEnhanced) {
    call_hook(hooks_.before_logic, "before_logic", buffers);
    worldsim::InvokeParams params;
    params[0] = cycle_param(n);
    params[1] = worldsim::Param::value_out();
    try {
      auto result =
          env_.world->invoke(*session_, worldsim::entry::kExec, params, &instrumentation_);
      report.stale_inputs = result.params[1].a != 0;
      report.actuator_errors = result.params[1].b;
    } catch (const worldsim::WorldError& e) {
      ta_failure(e);
    }
    return;
  }

  logic::ProcessImage image = logic::ProcessImage::zeros(shape_);
  report.stale_inputs = links_->read_inputs(image);
  buffers.inputs = &image;
  call_hook(hooks_.before_logic, "before_logic", buffers);
  buffers.inputs = nullptr;

  if (config_.mode == Mode::kBaseline) {
    {
      ScopedPhase phase(&recorder_, Phase::kLogicExec);
      instrumentation_.charge_logic();
      image = logic::eval_cycle(*bound_, *state_, image);
    }
    report.actuator_errors = links_->write_outputs(image);
    ScopedPhase phase(&recorder_, Phase::kSnapshotPublish);
    instrumentation_.charge_snapshot();
    board_.publish({n, env_.clock->now(), image});
    return;
  }

  worldsim::InvokeParams params;
  params[0] = worldsim::Param::memref_in(logic::encode_inputs(image));
  params[1] = cycle_param(n);
  params[2] = worldsim::Param::memref_out();
  try {
    auto result = env_.world->invoke(*session_, worldsim::entry::kControlLogic,
                                     std::move(params), &instrumentation_);
    logic::ProcessImage out = logic::decode_image(result.params[2].buffer);
    image.output_bits = out.output_bits;
    image.output_words = out.output_words;
  } catch (const worldsim::WorldError& e) {
    ta_failure(e);
  }
  report.actuator_errors = links_->write_outputs(image);
}

RunSummary Runtime::run(const std::function<void(const CycleReport&)>& on_report) {
  stop_ = false;
  RunSummary summary;
  std::uint64_t limit = config_.cycle_limit.value_or(UINT64_MAX);
  if (config_.mode == Mode::kBaseline && limit == 0) return summary;
  start();
  Clock& clock = *env_.clock;
  for (std::uint64_t n = 1; n <= limit && !stop_; ++n) {
    if (hooks_.cycle_start) hooks_.cycle_start(n);
    recorder_.reset();
    instrumentation_.cycle = n;
    instrumentation_.transaction = 0;
    CycleReport report;
    report.cycle_number = n;
    report.start = clock.now();
    cycle(n, report);
    report.total = clock.now() - report.start;
    report.phases = recorder_.times();
    report.overrun = report.total > config_.interval;

    NormalWorldBuffers buffers;
    buffers.cycle = n;
    buffers.shm = shm_.get();
    buffers.board = config_.mode == Mode::kBaseline ? &board_ : nullptr;
    call_hook(hooks_.after_publish, "after_publish", buffers);

    ++summary.cycles;
    if (report.stale_inputs) ++summary.stale_cycles;
    if (report.overrun) ++summary.overruns;
    if (on_report) on_report(report);
    if (hooks_.cycle_end) hooks_.cycle_end(n);

    Duration next = report.start + config_.interval;
    Duration now = clock.now();
    if (now < next) clock.sleep_for(next - now);
  }
  if (links_) summary.link_events = links_->events();
  finish();
  return summary;
}

SnapshotSource Runtime::snapshot_source() const {
  if (config_.mode == Mode::kBaseline) {
    const SnapshotBoard* board = &board_;
    return [board] { return board->latest(); };
  }
  worldsim::WorldSimulator* world = env_.world;
  return [world]() -> std::optional<Snapshot> {
    auto region = world->shm(kSnapshotRegion);
    if (!region) return std::nullopt;
    return decode_snapshot(region->normal_read());
  };
}

std::vector<NormalWorldAccess> Runtime::accesses() const {
  std::lock_guard lock(access_mu_);
  return accesses_;
}

std::function<void(const CycleReport&)> json_lines_writer(std::ostream& out) {
  return [&out](const CycleReport& r) { out << to_json_line(r) << '\n'; };
}

}  // namespace tzplc::runtime
