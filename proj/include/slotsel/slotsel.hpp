// Copyright 2026 The Authors.
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

#ifndef SLOTSEL_SLOTSEL_HPP
#define SLOTSEL_SLOTSEL_HPP

#include "slotsel/baselines.hpp"
#include "slotsel/bicriteria.hpp"
#include "slotsel/continuous_greedy.hpp"
#include "slotsel/disjoint.hpp"
#include "slotsel/generator.hpp"
#include "slotsel/geo.hpp"
#include "slotsel/influence.hpp"
#include "slotsel/instance.hpp"
#include "slotsel/io.hpp"
#include "slotsel/model.hpp"
#include "slotsel/multilinear.hpp"
#include "slotsel/rng.hpp"
#include "slotsel/sweep.hpp"

#endif  // SLOTSEL_SLOTSEL_HPP
