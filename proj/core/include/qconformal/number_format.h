// Copyright 2026 The qconformal Authors
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

#ifndef QCONFORMAL_NUMBER_FORMAT_H_
#define QCONFORMAL_NUMBER_FORMAT_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace qconformal {

// Shortest decimal text that parses back to exactly the same double.
// Non-finite values print as "inf", "-inf" and "nan".
std::string format_double(double value);

// Strict parse of a whole field; returns false on any trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, std::int64_t& out);
bool parse_uint64(std::string_view text, std::uint64_t& out);

}  // namespace qconformal

#endif  // QCONFORMAL_NUMBER_FORMAT_H_
