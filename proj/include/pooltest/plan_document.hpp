// Copyright 2026 The pooltest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Human- and machine-readable renderings of a Plan, laid out like the
// published procedure tables: one row per terminal pattern, the states met
// along the way, and the final group.

#ifndef POOLTEST_PLAN_DOCUMENT_HPP_
#define POOLTEST_PLAN_DOCUMENT_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "pooltest/plan.hpp"

namespace pooltest {

/// Terminal nodes in display order: cleared groups first, then groups sent
/// to individual tests; shorter patterns first within each block.
std::vector<const PlanNode*> display_order(const Plan& plan);

/// Plain-text table plus expected totals and analytic accuracy.
std::string plan_document_text(const Plan& plan);

nlohmann::ordered_json plan_document_json(const Plan& plan);

}  // namespace pooltest

#endif  // POOLTEST_PLAN_DOCUMENT_HPP_
