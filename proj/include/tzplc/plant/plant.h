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

#ifndef TZPLC_PLANT_PLANT_H_
#define TZPLC_PLANT_PLANT_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tzplc/common/clock.h"
#include "tzplc/common/rng.h"
#include "tzplc/modbus/bank.h"
#include "tzplc/modbus/server.h"

namespace tzplc::plant {

// ---------------------------------------------------------------------------
// Filling tank

struct TankState {
  double level = 0.5;
  bool demand = false;
  bool pump_on = false;
  bool motor_on = false;
  double inflow_rate = 0.1;    // fraction of capacity per second
  double outflow_rate = 0.08;  // fraction of capacity per second
};

// level' = clamp(level + motor*inflow*dt - (pump and demand)*outflow*dt, 0, 1)
TankState step_tank(const TankState& state, Duration dt, bool pump_cmd, bool motor_cmd,
                    bool demand);

// Unclamped level change of one step (the mass-balance term).
double tank_delta(const TankState& state, Duration dt, bool pump_cmd, bool motor_cmd,
                  bool demand);

// Seeded on/off square wave with random half-periods in [min_hold, max_hold].
class DemandSchedule {
 public:
  DemandSchedule(std::uint64_t seed, Duration min_hold, Duration max_hold);
  bool at(Duration t);

 private:
  Rng rng_;
  Duration min_hold_;
  Duration max_hold_;
  Duration next_toggle_{0};
  bool value_ = false;
};

// ---------------------------------------------------------------------------
// Generator synchronization

struct GeneratorState {
  std::int32_t speed1 = 5000;
  std::int32_t speed2 = 4000;
  bool cb1_closed = false;
  bool cb2_closed = false;
  double drift_rate = 100.0;  // units per second, speed2 towards speed1
  std::int32_t noise_bound = 1;
  // Sub-unit drift carried between steps.
  double drift_carry = 0.0;
};

// `noise` is the bounded disturbance for this step (|noise| <= noise_bound).
// While a breaker is open, speed2 moves toward speed1 by drift_rate*dt and
// then takes the noise. Once both are closed the machines are locked.
GeneratorState step_generators(const GeneratorState& state, Duration dt, bool cb1_cmd,
                               bool cb2_cmd, std::int32_t noise = 0);

// ---------------------------------------------------------------------------
// Scenarios exposed as Modbus slaves

enum class SlaveRole { kSensor, kActuator };

struct SlaveSpec {
  std::string name;
  SlaveRole role = SlaveRole::kSensor;
  std::uint8_t unit = 1;
  modbus::BankShape shape;
};

// One actuator write as seen at the slave.
struct ActuatorWrite {
  std::size_t slave = 0;
  std::uint8_t function = 0;
  Bytes data;

  bool operator==(const ActuatorWrite&) const = default;
};

class WriteLog {
 public:
  void record(ActuatorWrite w);
  std::vector<ActuatorWrite> writes() const;
  // Canonical byte form: per write, slave u16 | function | length u16 | data.
  Bytes bytes() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<ActuatorWrite> writes_;
};

// A simulated process plus its slave devices. Sensor banks are refreshed
// from the state after every step; actuator banks are read as commands at
// the start of each step. All access to the state is serialized.
class Scenario {
 public:
  virtual ~Scenario() = default;

  virtual std::string name() const = 0;
  const std::vector<SlaveSpec>& slaves() const { return specs_; }
  std::shared_ptr<modbus::BankHandler> handler(std::size_t slave) const {
    return handlers_.at(slave);
  }
  const WriteLog& write_log() const { return log_; }

  void step(Duration dt);
  std::uint64_t steps() const { return steps_; }

 protected:
  void add_slave(SlaveSpec spec);
  // Called with the scenario lock held.
  virtual void advance(Duration dt) = 0;
  virtual void publish_sensors() = 0;

  bool coil(std::size_t slave, std::uint16_t address) const;
  void set_coils(std::size_t slave, std::uint16_t start, const std::vector<bool>& v);
  void set_register(std::size_t slave, std::uint16_t address, std::uint16_t value);
  void init_sensors();

  mutable std::mutex mu_;

 private:
  std::vector<SlaveSpec> specs_;
  std::vector<std::shared_ptr<modbus::BankHandler>> handlers_;
  WriteLog log_;
  std::uint64_t steps_ = 0;
};

struct TankConfig {
  TankState initial;
  double low_mark = 0.3;
  double high_mark = 0.8;
  Duration demand_min_hold = std::chrono::seconds(2);
  Duration demand_max_hold = std::chrono::seconds(8);
  std::uint64_t seed = 1;
};

// Slaves: S1 (coils: LOW, HIGH), S2 (coil: DEMAND), M (coil), P (coil).
class TankScenario final : public Scenario {
 public:
  explicit TankScenario(TankConfig config);

  std::string name() const override { return "tank"; }
  TankState state() const;
  const TankConfig& config() const { return config_; }

 protected:
  void advance(Duration dt) override;
  void publish_sensors() override;

 private:
  TankConfig config_;
  TankState state_;
  DemandSchedule demand_;
  Duration time_{0};
};

struct GeneratorConfig {
  GeneratorState initial;
  std::uint64_t seed = 1;
};

struct BreakerClosure {
  std::uint64_t step = 0;
  int breaker = 0;  // 1 or 2
  std::int32_t delta = 0;
};

// Slaves: IED1 (holding 0 = speed1), IED2 (holding 0 = speed2),
// CB1 (coil), CB2 (coil).
class GeneratorScenario final : public Scenario {
 public:
  explicit GeneratorScenario(GeneratorConfig config);

  // Seeded starting point: speeds and offsets vary per seed.
  static GeneratorConfig seeded(std::uint64_t seed);

  std::string name() const override { return "generator"; }
  GeneratorState state() const;
  std::vector<BreakerClosure> closures() const;

 protected:
  void advance(Duration dt) override;
  void publish_sensors() override;

 private:
  GeneratorState state_;
  Rng noise_;
  std::vector<BreakerClosure> closures_;
};

struct LoopbackConfig {
  std::size_t pairs = 1;
  // Sensor bits follow a seeded pattern that changes every `period` steps;
  // 0 keeps them constant.
  std::uint64_t period = 0;
  std::uint64_t seed = 1;
};

// N independent sensor/actuator pairs: sensor i exposes one coil, actuator i
// accepts one coil. Used by the bench and the attack harness.
class LoopbackScenario final : public Scenario {
 public:
  explicit LoopbackScenario(LoopbackConfig config);

  std::string name() const override { return "loopback"; }
  std::vector<bool> sensor_values() const;

 protected:
  void advance(Duration dt) override;
  void publish_sensors() override;

 private:
  LoopbackConfig config_;
  Rng rng_;
  std::vector<bool> values_;
};

// The ST program matching LoopbackScenario: each output copies its input.
std::string loopback_program(std::size_t pairs);

// ---------------------------------------------------------------------------
// Serving

struct ExposeOptions {
  std::string host = "127.0.0.1";
  // 0: ephemeral ports. Otherwise slave i listens on base_port + i.
  std::uint16_t base_port = 0;
  // Injected per direction (wall-clock runs); RTT is twice this.
  Duration one_way_delay{0};
  // Per-slave handshake wrapper (secure slaves); empty entries are plain.
  std::vector<modbus::StreamWrapper> wrappers;
  std::function<void(std::string_view)> log;
};

struct SlaveEndpoint {
  std::string name;
  SlaveRole role;
  net::Endpoint endpoint;
};

class SlaveSet {
 public:
  const std::vector<SlaveEndpoint>& endpoints() const { return endpoints_; }
  void stop();

 private:
  friend SlaveSet expose_slaves(Scenario& scenario, const ExposeOptions& options);
  std::vector<SlaveEndpoint> endpoints_;
  std::vector<std::unique_ptr<modbus::Server>> servers_;
};

// Errors: net PortInUse.
SlaveSet expose_slaves(Scenario& scenario, const ExposeOptions& options);

// Steps a scenario on its own thread at a fixed wall-clock period.
class WallStepper {
 public:
  WallStepper(Scenario& scenario, Duration period);
  ~WallStepper();
  void stop();

 private:
  Scenario& scenario_;
  Duration period_;
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

}  // namespace tzplc::plant

#endif  // TZPLC_PLANT_PLANT_H_
