// Copyright 2026 The H2V Authors.
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

#include "h2v/error.hpp"

namespace h2v {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kEmptyInput: return "empty_input";
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kGeometry: return "geometry";
    case ErrorKind::kCoverage: return "coverage";
    case ErrorKind::kMetric: return "metric";
    case ErrorKind::kReport: return "report";
    case ErrorKind::kFault: return "fault";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return 2;
    case ErrorKind::kFault: return 4;
    default: return 3;
  }
}

}  // namespace h2v
