// Copyright 2026 The vann Authors
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

#include "vann/annoy.hpp"
#include "vann/bench.hpp"
#include "vann/dataset.hpp"
#include "vann/error.hpp"
#include "vann/exact.hpp"
#include "vann/hnsw.hpp"
#include "vann/index.hpp"
#include "vann/index_io.hpp"
#include "vann/io.hpp"
#include "vann/ivf_flat.hpp"
#include "vann/ivf_pq.hpp"
#include "vann/kernels.hpp"
#include "vann/kmeans.hpp"
#include "vann/nsw.hpp"
#include "vann/profile.hpp"
#include "vann/report.hpp"
#include "vann/sim.hpp"
#include "vann/sim_io.hpp"
