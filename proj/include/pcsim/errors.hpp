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

#ifndef PCSIM__ERRORS_HPP_
#define PCSIM__ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace pcsim
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (not JSON, wrong shapes).
class ParseError : public Error
{
public:
  using Error::Error;
};

/// An invariant violation; `field_path()` names the offending field, e.g. `ego.samples[3].speed`.
class ValidationError : public Error
{
public:
  ValidationError(std::string field_path, const std::string & what)
  : Error(field_path + ": " + what), field_path_(std::move(field_path))
  {
  }

  const std::string & field_path() const noexcept { return field_path_; }

private:
  std::string field_path_;
};

class IoError : public Error
{
public:
  using Error::Error;
};

/// Inconsistent experiment / brake configuration.
class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace pcsim

#endif  // PCSIM__ERRORS_HPP_
