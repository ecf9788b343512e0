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

#ifndef TZPLC_LOGIC_EVAL_H_
#define TZPLC_LOGIC_EVAL_H_

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "tzplc/logic/image.h"
#include "tzplc/logic/program.h"

namespace tzplc::logic {

// A program resolved against a concrete image shape.
class BoundProgram {
 public:
  const LogicProgram& program() const { return *program_; }
  const ImageShape& shape() const { return shape_; }

  // True if some statement reads the variable located at `address`.
  bool reads(const LocatedAddress& address) const;

 private:
  friend BoundProgram bind(LogicProgram program, const ImageShape& shape);

  std::shared_ptr<const LogicProgram> program_;
  ImageShape shape_;
  std::vector<bool> read_vars_;
};

// Errors: AddressOutOfRange.
BoundProgram bind(LogicProgram program, const ImageShape& shape);

// Convenience: parse + bind.
BoundProgram compile(std::string_view source, const ImageShape& shape);

// Values of every declared variable, carried from one cycle to the next.
// Located outputs keep their value here as well, so the output image is a
// function of this state and the input image only.
struct ProgramState {
  std::vector<std::int32_t> values;

  bool operator==(const ProgramState&) const = default;
};

ProgramState initial_state(const BoundProgram& bound);

// One logic scan: load located inputs, run the body, store located outputs.
// Returns the new image; its input banks are a copy of `image`'s. `state` is
// only committed on success (ArithmeticOverflow leaves it untouched).
ProcessImage eval_cycle(const BoundProgram& bound, ProgramState& state,
                        const ProcessImage& image);

// Stateless form starting from the initial state.
ProcessImage eval_cycle(const BoundProgram& bound, const ProcessImage& image);

}  // namespace tzplc::logic

#endif  // TZPLC_LOGIC_EVAL_H_
