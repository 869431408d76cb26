// Copyright 2026 The camtrack Authors
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

#ifndef CAMTRACK__ERROR_HPP_
#define CAMTRACK__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace camtrack
{

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kParse,
  kUnknownKey,
  kMissingCategory,
  kMissingKey,
  kOutOfRange,
  kTypeMismatch,
  kUnknownCategory,
  kOutOfOrder,
  kInternal,
};

const char * error_code_name(ErrorCode code);

/// Exception type thrown by every fallible camtrack operation.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message)
  : std::runtime_error(message), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace camtrack

#endif  // CAMTRACK__ERROR_HPP_
