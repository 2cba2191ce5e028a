// Copyright 2026 seqcanary authors.
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

#ifndef SEQCANARY_SEQCANARY_HPP_
#define SEQCANARY_SEQCANARY_HPP_

#include "seqcanary/baselines.hpp"
#include "seqcanary/bounds.hpp"
#include "seqcanary/empirical.hpp"
#include "seqcanary/errors.hpp"
#include "seqcanary/ingest.hpp"
#include "seqcanary/random.hpp"
#include "seqcanary/renewal.hpp"
#include "seqcanary/simulate.hpp"
#include "seqcanary/testing.hpp"
#include "seqcanary/twosample.hpp"

#endif  // SEQCANARY_SEQCANARY_HPP_
