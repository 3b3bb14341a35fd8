// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "opm/dsl.hpp"

namespace opm::cli {

using nlohmann::json;

/// `{"exact": "3/14", "percent": "21.4%"}`
json rational_json(const Rational& r);

json to_json(const Architecture& arch);
json to_json(const Distribution& d);
json to_json(const CompileReport& r);
json to_json(const ProbCheckReport& r);
json to_json(const ModeCheckReport& r);
json to_json(const LiftingReport& r);

}  // namespace opm::cli
