// Copyright 2026 The stabbell developers
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

#pragma once

#include "stabbell/bell.hpp"
#include "stabbell/builders.hpp"
#include "stabbell/catalogue.hpp"
#include "stabbell/classical.hpp"
#include "stabbell/coloring.hpp"
#include "stabbell/gf2.hpp"
#include "stabbell/graph.hpp"
#include "stabbell/io.hpp"
#include "stabbell/operators.hpp"
#include "stabbell/pauli.hpp"
#include "stabbell/quantum.hpp"
#include "stabbell/robust.hpp"
#include "stabbell/state.hpp"
