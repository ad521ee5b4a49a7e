// Copyright 2026 The pcsim Authors
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

#ifndef PCSIM__SCENARIO_IO_HPP_
#define PCSIM__SCENARIO_IO_HPP_

#include "pcsim/scenario.hpp"

#include <string>
#include <vector>

namespace pcsim
{

struct LoadOptions
{
  bool lenient{false};  // unknown keys become warnings instead of errors
  bool resample{true};
};

/// Parses scenario JSON text. Throws ParseError or ValidationError.
Scenario parse_scenario(const std::string & text, const LoadOptions & options = {},
                        std::vector<std::string> * warnings = nullptr);

/// Reads, validates and resamples a scenario file. Throws IoError, ParseError or ValidationError.
Scenario load_scenario(const std::string & path, const LoadOptions & options = {},
                       std::vector<std::string> * warnings = nullptr);

std::string serialize_scenario(const Scenario & scenario);

/// Throws IoError when the file cannot be written.
void save_scenario(const Scenario & scenario, const std::string & path);

}  // namespace pcsim

#endif  // PCSIM__SCENARIO_IO_HPP_
