// Copyright 2026 The tagground Authors
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

#include "tagground/config.hpp"
#include "tagground/corpus.hpp"
#include "tagground/error.hpp"
#include "tagground/expansion.hpp"
#include "tagground/grounding.hpp"
#include "tagground/harness.hpp"
#include "tagground/knowledge.hpp"
#include "tagground/recommender.hpp"
#include "tagground/text.hpp"
