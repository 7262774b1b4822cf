// Copyright 2026 The corecut Authors
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

#ifndef CORECUT_CORECUT_HPP
#define CORECUT_CORECUT_HPP

#include "corecut/charts.hpp"
#include "corecut/cuts.hpp"
#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/instances.hpp"
#include "corecut/io.hpp"
#include "corecut/linear_program.hpp"
#include "corecut/membership.hpp"
#include "corecut/optimizer.hpp"
#include "corecut/oracle.hpp"
#include "corecut/rational.hpp"
#include "corecut/simplex.hpp"

#endif  // CORECUT_CORECUT_HPP
