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

#include "tzplc/plant/plant.h"

#include <algorithm>
#include <cmath>

namespace tzplc::plant {

namespace {

double seconds(Duration d) { return std::chrono::duration<double>(d).count(); }

}  // namespace

double tank_delta(const TankState& state, Duration dt, bool pump_cmd, bool motor_cmd,
                  bool demand) {
  double t = seconds(dt);
  double in = motor_cmd ? state.inflow_rate * t : 0.0;
  double out = (pump_cmd && demand) ? state.outflow_rate * t : 0.0;
  return in - out;
}

TankState step_tank(const TankState& state, Duration dt, bool pump_cmd, bool motor_cmd,
                    bool demand) {
  TankState next = state;
  next.level = std::clamp(state.level + tank_delta(state, dt, pump_cmd, motor_cmd, demand),
                          0.0, 1.0);
  next.pump_on = pump_cmd;
  next.motor_on = motor_cmd;
  next.demand = demand;
  return next;
}

DemandSchedule::DemandSchedule(std::uint64_t seed, Duration min_hold, Duration max_hold)
    : rng_(derive_seed(seed, "demand")), min_hold_(min_hold), max_hold_(max_hold) {
  value_ = (rng_() & 1) != 0;
}

bool DemandSchedule::at(Duration t) {
  while (t >= next_toggle_) {
    if (next_toggle_.count() > 0) value_ = !value_;
    std::uniform_int_distribution<std::int64_t> hold(min_hold_.count(), max_hold_.count());
    next_toggle_ += Duration(hold(rng_));
  }
  return value_;
}

GeneratorState step_generators(const GeneratorState& state, Duration dt, bool cb1_cmd,
                               bool cb2_cmd, std::int32_t noise) {
  GeneratorState next = state;
  next.cb1_closed = cb1_cmd;
  next.cb2_closed = cb2_cmd;
  if (cb1_cmd && cb2_cmd) {
    next.speed2 = next.speed1;
    next.drift_carry = 0.0;
    return next;
  }
  double move = state.drift_rate * seconds(dt) + state.drift_carry;
  std::int32_t whole = static_cast<std::int32_t>(std::floor(move));
  next.drift_carry = move - whole;
  std::int32_t gap = state.speed1 - state.speed2;
  std::int32_t step = std::min(whole, std::abs(gap));
  next.speed2 += gap >= 0 ? step : -step;
  noise = std::clamp(noise, -state.noise_bound, state.noise_bound);
  next.speed2 = std::max(0, next.speed2 + noise);
  return next;
}

void WriteLog::record(ActuatorWrite w) {
  std::lock_guard lock(mu_);
  writes_.push_back(std::move(w));
}

std::vector<ActuatorWrite> WriteLog::writes() const {
  std::lock_guard lock(mu_);
  return writes_;
}

Bytes WriteLog::bytes() const {
  std::lock_guard lock(mu_);
  Bytes out;
  for (const auto& w : writes_) {
    put_u16(out, static_cast<std::uint16_t>(w.slave));
    out.push_back(w.function);
    put_u16(out, static_cast<std::uint16_t>(w.data.size()));
    append(out, w.data);
  }
  return out;
}

std::size_t WriteLog::size() const {
  std::lock_guard lock(mu_);
  return writes_.size();
}

void Scenario::add_slave(SlaveSpec spec) {
  std::size_t index = specs_.size();
  modbus::BankHandler::Hooks hooks;
  if (spec.role == SlaveRole::kActuator) {
    hooks.after_write = [this, index](modbus::RegisterBank&, const modbus::Pdu& request) {
      log_.record({index, request.function, request.data});
    };
  }
  handlers_.push_back(std::make_shared<modbus::BankHandler>(spec.shape, std::move(hooks)));
  specs_.push_back(std::move(spec));
}

void Scenario::step(Duration dt) {
  std::lock_guard lock(mu_);
  advance(dt);
  publish_sensors();
  ++steps_;
}

void Scenario::init_sensors() {
  std::lock_guard lock(mu_);
  publish_sensors();
}

bool Scenario::coil(std::size_t slave, std::uint16_t address) const {
  return handlers_.at(slave)->with_bank(
      [&](modbus::RegisterBank& b) { return b.coil(address); });
}

void Scenario::set_coils(std::size_t slave, std::uint16_t start, const std::vector<bool>& v) {
  handlers_.at(slave)->with_bank([&](modbus::RegisterBank& b) { b.write_coils(start, v); });
}

void Scenario::set_register(std::size_t slave, std::uint16_t address, std::uint16_t value) {
  handlers_.at(slave)->with_bank(
      [&](modbus::RegisterBank& b) { b.write_holding(address, {value}); });
}

// ---------------------------------------------------------------------------

namespace tank {
constexpr std::size_t kS1 = 0;
constexpr std::size_t kS2 = 1;
constexpr std::size_t kM = 2;
constexpr std::size_t kP = 3;
}  // namespace tank

TankScenario::TankScenario(TankConfig config)
    : config_(config),
      state_(config.initial),
      demand_(config.seed, config.demand_min_hold, config.demand_max_hold) {
  add_slave({"S1", SlaveRole::kSensor, 1, {2, 0, 0, 0}});
  add_slave({"S2", SlaveRole::kSensor, 1, {1, 0, 0, 0}});
  add_slave({"M", SlaveRole::kActuator, 1, {1, 0, 0, 0}});
  add_slave({"P", SlaveRole::kActuator, 1, {1, 0, 0, 0}});
  state_.demand = demand_.at(time_);
  init_sensors();
}

TankState TankScenario::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

void TankScenario::advance(Duration dt) {
  bool motor = coil(tank::kM, 0);
  bool pump = coil(tank::kP, 0);
  state_ = step_tank(state_, dt, pump, motor, state_.demand);
  time_ += dt;
  state_.demand = demand_.at(time_);
}

void TankScenario::publish_sensors() {
  set_coils(tank::kS1, 0,
            {state_.level <= config_.low_mark, state_.level >= config_.high_mark});
  set_coils(tank::kS2, 0, {state_.demand});
}

// ---------------------------------------------------------------------------

namespace gen {
constexpr std::size_t kIed1 = 0;
constexpr std::size_t kIed2 = 1;
constexpr std::size_t kCb1 = 2;
constexpr std::size_t kCb2 = 3;
}  // namespace gen

GeneratorScenario::GeneratorScenario(GeneratorConfig config)
    : state_(config.initial), noise_(derive_seed(config.seed, "generator-noise")) {
  add_slave({"IED1", SlaveRole::kSensor, 1, {0, 0, 1, 0}});
  add_slave({"IED2", SlaveRole::kSensor, 1, {0, 0, 1, 0}});
  add_slave({"CB1", SlaveRole::kActuator, 1, {1, 0, 0, 0}});
  add_slave({"CB2", SlaveRole::kActuator, 1, {1, 0, 0, 0}});
  init_sensors();
}

GeneratorConfig GeneratorScenario::seeded(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "generator-init"));
  GeneratorConfig c;
  c.seed = seed;
  c.initial.speed1 = 4900 + static_cast<std::int32_t>(rng() % 200);
  std::int32_t offset = 300 + static_cast<std::int32_t>(rng() % 1200);
  c.initial.speed2 = c.initial.speed1 + ((rng() & 1) ? offset : -offset);
  c.initial.drift_rate = 100.0 + static_cast<double>(rng() % 100);
  c.initial.noise_bound = 1;
  return c;
}

GeneratorState GeneratorScenario::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::vector<BreakerClosure> GeneratorScenario::closures() const {
  std::lock_guard lock(mu_);
  return closures_;
}

void GeneratorScenario::advance(Duration dt) {
  bool cb1 = coil(gen::kCb1, 0);
  bool cb2 = coil(gen::kCb2, 0);
  std::int32_t delta = std::abs(state_.speed1 - state_.speed2);
  if (cb1 && !state_.cb1_closed) closures_.push_back({steps(), 1, delta});
  if (cb2 && !state_.cb2_closed) closures_.push_back({steps(), 2, delta});
  std::uniform_int_distribution<std::int32_t> noise(-state_.noise_bound, state_.noise_bound);
  state_ = step_generators(state_, dt, cb1, cb2, noise(noise_));
}

void GeneratorScenario::publish_sensors() {
  set_register(gen::kIed1, 0, static_cast<std::uint16_t>(state_.speed1));
  set_register(gen::kIed2, 0, static_cast<std::uint16_t>(state_.speed2));
}

// ---------------------------------------------------------------------------

LoopbackScenario::LoopbackScenario(LoopbackConfig config)
    : config_(config), rng_(derive_seed(config.seed, "loopback")), values_(config.pairs) {
  for (std::size_t i = 0; i < config_.pairs; ++i) {
    add_slave({"sensor" + std::to_string(i), SlaveRole::kSensor, 1, {1, 0, 0, 0}});
  }
  for (std::size_t i = 0; i < config_.pairs; ++i) {
    add_slave({"actuator" + std::to_string(i), SlaveRole::kActuator, 1, {1, 0, 0, 0}});
  }
  for (std::size_t i = 0; i < config_.pairs; ++i) values_[i] = (rng_() & 1) != 0;
  init_sensors();
}

std::vector<bool> LoopbackScenario::sensor_values() const {
  std::lock_guard lock(mu_);
  return values_;
}

void LoopbackScenario::advance(Duration) {
  if (config_.period == 0 || (steps() + 1) % config_.period != 0) return;
  for (std::size_t i = 0; i < config_.pairs; ++i) values_[i] = (rng_() & 1) != 0;
}

void LoopbackScenario::publish_sensors() {
  for (std::size_t i = 0; i < config_.pairs; ++i) set_coils(i, 0, {values_[i]});
}

std::string loopback_program(std::size_t pairs) {
  std::string decls;
  std::string body;
  for (std::size_t i = 0; i < pairs; ++i) {
    std::string n = std::to_string(i);
    std::string addr = std::to_string(i / 8) + "." + std::to_string(i % 8);
    decls += "    I" + n + " AT %IX" + addr + " : BOOL;\n";
    decls += "    Q" + n + " AT %QX" + addr + " : BOOL;\n";
    body += "  Q" + n + " := I" + n + ";\n";
  }
  return "PROGRAM loopback\n  VAR\n" + decls + "  END_VAR\n" + body + "END_PROGRAM\n";
}

// ---------------------------------------------------------------------------

void SlaveSet::stop() {
  for (auto& s : servers_) s->stop();
}

SlaveSet expose_slaves(Scenario& scenario, const ExposeOptions& options) {
  SlaveSet set;
  const auto& specs = scenario.slaves();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    modbus::ServerOptions so;
    so.bind = {options.host, static_cast<std::uint16_t>(
                                 options.base_port == 0 ? 0 : options.base_port + i)};
    if (i < options.wrappers.size()) so.wrap = options.wrappers[i];
    so.request_delay = options.one_way_delay;
    so.response_delay = options.one_way_delay;
    so.log = options.log;
    auto server = modbus::Server::start(scenario.handler(i), std::move(so));
    set.endpoints_.push_back({specs[i].name, specs[i].role, server->endpoint()});
    set.servers_.push_back(std::move(server));
  }
  return set;
}

WallStepper::WallStepper(Scenario& scenario, Duration period)
    : scenario_(scenario), period_(period) {
  thread_ = std::thread([this] {
    auto next = std::chrono::steady_clock::now() + period_;
    while (!stop_) {
      std::this_thread::sleep_until(next);
      next += period_;
      scenario_.step(period_);
    }
  });
}

WallStepper::~WallStepper() { stop(); }

void WallStepper::stop() {
  stop_ = true;
  if (thread_.joinable()) thread_.join();
}

}  // namespace tzplc::plant
