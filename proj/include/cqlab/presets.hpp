// Copyright 2026 The cqlab Authors.
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

// Bundled channels with known capacities.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqlab/io.hpp"

namespace cqlab {

struct Preset {
  std::string name;
  std::string description;
  ChannelFile file;
  // Holevo capacity in nats.
  double capacity = 0.0;
};

// orthogonal-pure, identical-states, bsc[:p], two-pure-overlap[:theta], trine.
const std::vector<std::string>& preset_names();

// "name" or "name:param".
Preset make_preset(const std::string& spec);

Preset orthogonal_pure();
Preset identical_states();
Preset bsc(double p);
// |psi_0> = |0>, |psi_1> = sin(theta)|0> + cos(theta)|1>.
Preset two_pure_overlap(double theta);
Preset trine();

double binary_entropy(double p);

}  // namespace cqlab
