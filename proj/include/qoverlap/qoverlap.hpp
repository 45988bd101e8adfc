// Copyright 2026 The qoverlap Authors
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


// Umbrella header: the whole library in one include.
#pragma once

#include "qoverlap/errors.hpp"
#include "qoverlap/seed.hpp"
#include "qoverlap/parallel.hpp"
#include "qoverlap/optics/matrix.hpp"
#include "qoverlap/optics/mzi.hpp"
#include "qoverlap/optics/mesh.hpp"
#include "qoverlap/optics/permanent.hpp"
#include "qoverlap/optics/fock.hpp"
#include "qoverlap/chip/qudit.hpp"
#include "qoverlap/chip/overlap_circuit.hpp"
#include "qoverlap/chip/crosstalk.hpp"
#include "qoverlap/chip/calibration.hpp"
#include "qoverlap/overlap/estimators.hpp"
#include "qoverlap/overlap/experiment.hpp"
#include "qoverlap/cv/phase_space.hpp"
#include "qoverlap/kernel/dataset.hpp"
#include "qoverlap/kernel/kernel_matrix.hpp"
#include "qoverlap/kernel/svm.hpp"
#include "qoverlap/online/spsa.hpp"
#include "qoverlap/io/config.hpp"
#include "qoverlap/io/output.hpp"
