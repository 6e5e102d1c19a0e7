// Copyright 2026 The PlusDC Authors.
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

#ifndef PLUSDC_CORE_ERROR_H_
#define PLUSDC_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace plusdc {

// Error categories. The numeric values are the status codes of the C API.
enum class ErrorCode {
  kInput = 1,         // malformed or inconsistent caller input
  kDomain = 2,        // input valid but outside the operation's domain
  kCapability = 3,    // problem too large for an exact method
  kNumeric = 4,       // numerical breakdown
  kIo = 5,            // file system / parse failures
  kPrecondition = 6,  // a mathematical hypothesis does not hold
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) throw Error(code, message);
}

}  // namespace plusdc

#endif  // PLUSDC_CORE_ERROR_H_
