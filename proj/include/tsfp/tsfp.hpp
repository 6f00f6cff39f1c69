// Copyright 2026 The tsfp Authors
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

#ifndef TSFP_TSFP_HPP_
#define TSFP_TSFP_HPP_

#include "tsfp/confidence.hpp"
#include "tsfp/evalkit.hpp"
#include "tsfp/fresnel.hpp"
#include "tsfp/fuse.hpp"
#include "tsfp/polarcore.hpp"
#include "tsfp/synthpolar.hpp"

#endif  // TSFP_TSFP_HPP_
