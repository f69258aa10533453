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

#include "spdmboot/spdm_common.hpp"

namespace spdmboot {

const char* to_string(ConnectionState s) {
  switch (s) {
    case ConnectionState::Fresh: return "Fresh";
    case ConnectionState::VcaDone: return "VcaDone";
    case ConnectionState::Authenticated: return "Authenticated";
    case ConnectionState::Measured: return "Measured";
    case ConnectionState::SessionEstablished: return "SessionEstablished";
    case ConnectionState::Failed: return "Failed";
  }
  return "?";
}

void ConnectionContext::fail(std::uint32_t code) {
  if (state == ConnectionState::Failed) return;
  state = ConnectionState::Failed;
  failure_code = code;
}

bool ConnectionContext::advance(ConnectionState next) {
  if (state == ConnectionState::Failed) return false;
  if (static_cast<int>(next) < static_cast<int>(state)) {
    fail(status::kUnexpectedOrder);
    return false;
  }
  state = next;
  return true;
}

void ConnectionContext::seed_m1m2() {
  if (transcript_m1m2.empty()) {
    transcript_m1m2 = transcript_vca;
  }
}

void ConnectionContext::append_vca(ByteSpan message) {
  transcript_vca.insert(transcript_vca.end(), message.begin(), message.end());
}

void ConnectionContext::append_m1m2(ByteSpan message) {
  transcript_m1m2.insert(transcript_m1m2.end(), message.begin(), message.end());
}

}  // namespace spdmboot
