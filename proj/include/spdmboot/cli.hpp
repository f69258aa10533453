// Copyright 2026 the spdmboot authors
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

#include <iosfwd>

namespace spdmboot {

// Exit codes: 0 booted, 2 integrity halt, 3 authenticity halt, 4 no boot
// device, 64 usage error. Boot diagnostics go to err verbatim.
int cli_run(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace spdmboot
