// Copyright 2026 The Arena Audit Authors.
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

#ifndef ARENA_AUDIT_CORE_SRC_CSV_HPP_
#define ARENA_AUDIT_CORE_SRC_CSV_HPP_

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace arena::internal {

// Reads one CSV record (RFC 4180: quoted fields may contain commas, newlines
// and doubled quotes). Returns nullopt at end of input. `line` is advanced
// past every physical line the record spans.
std::optional<std::vector<std::string>> ReadCsvRecord(std::istream& in,
                                                      int& line);

}  // namespace arena::internal

#endif  // ARENA_AUDIT_CORE_SRC_CSV_HPP_
