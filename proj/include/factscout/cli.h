// Copyright 2026 The FactScout Authors.
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

// The `factscout` command line. Exit status: 0 on success, 1 when an
// operation fails, 2 on usage errors.

#pragma once

#include <ostream>

namespace factscout {

int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err);

}  // namespace factscout
