// Copyright 2026 The qphm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "qphm/checkpoint.hpp"
#include "qphm/data.hpp"
#include "qphm/data_io.hpp"
#include "qphm/encoding.hpp"
#include "qphm/error.hpp"
#include "qphm/gradcheck.hpp"
#include "qphm/hybrid.hpp"
#include "qphm/mlp.hpp"
#include "qphm/pqc.hpp"
#include "qphm/quantum_sim.hpp"
#include "qphm/report.hpp"
