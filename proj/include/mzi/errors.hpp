// Copyright 2026 The mzisim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Error codes and the exception type shared by every mzisim module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mzi {

enum class ErrorCode {
    // Network validation.
    CyclicGraph,
    NonUnitaryScatter,
    DanglingPort,
    DuplicateLabel,
    DuplicateId,
    UnknownNode,
    BadPort,
    PortConflict,
    SourceCount,
    InvalidArm,
    // Queries and experiments.
    UnknownLabel,
    VanishingTotal,
    DegeneratePointer,
    LengthMismatch,
    InvalidPlan,
    InvalidArgument,
    // Scenario documents.
    SchemaError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::CyclicGraph:
        return "CyclicGraph";
    case ErrorCode::NonUnitaryScatter:
        return "NonUnitaryScatter";
    case ErrorCode::DanglingPort:
        return "DanglingPort";
    case ErrorCode::DuplicateLabel:
        return "DuplicateLabel";
    case ErrorCode::DuplicateId:
        return "DuplicateId";
    case ErrorCode::UnknownNode:
        return "UnknownNode";
    case ErrorCode::BadPort:
        return "BadPort";
    case ErrorCode::PortConflict:
        return "PortConflict";
    case ErrorCode::SourceCount:
        return "SourceCount";
    case ErrorCode::InvalidArm:
        return "InvalidArm";
    case ErrorCode::UnknownLabel:
        return "UnknownLabel";
    case ErrorCode::VanishingTotal:
        return "VanishingTotal";
    case ErrorCode::DegeneratePointer:
        return "DegeneratePointer";
    case ErrorCode::LengthMismatch:
        return "LengthMismatch";
    case ErrorCode::InvalidPlan:
        return "InvalidPlan";
    case ErrorCode::InvalidArgument:
        return "InvalidArgument";
    case ErrorCode::SchemaError:
        return "SchemaError";
    }
    return "Unknown";
}

/// True for codes raised while validating a network description.
constexpr bool is_network_error(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::CyclicGraph:
    case ErrorCode::NonUnitaryScatter:
    case ErrorCode::DanglingPort:
    case ErrorCode::DuplicateLabel:
    case ErrorCode::DuplicateId:
    case ErrorCode::UnknownNode:
    case ErrorCode::BadPort:
    case ErrorCode::PortConflict:
    case ErrorCode::SourceCount:
    case ErrorCode::InvalidArm:
        return true;
    default:
        return false;
    }
}

/// One finding of a validation pass. `where` names the offending node, arm or
/// document path; `deviation` is only meaningful for NonUnitaryScatter.
struct Issue {
    ErrorCode code;
    std::string where;
    std::string message;
    double deviation = 0.0;
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &where, const std::string &message,
          double deviation = 0.0)
        : Error(std::vector<Issue>{Issue{code, where, message, deviation}}) {}

    explicit Error(std::vector<Issue> issues)
        : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

    /// Code of the first issue; callers branch on this.
    [[nodiscard]] ErrorCode code() const noexcept {
        return issues_.empty() ? ErrorCode::InvalidArgument : issues_.front().code;
    }
    [[nodiscard]] const std::vector<Issue> &issues() const noexcept {
        return issues_;
    }

  private:
    static std::string summarize(const std::vector<Issue> &issues) {
        std::string out;
        for (const auto &issue : issues) {
            if (!out.empty()) {
                out += "; ";
            }
            out += to_string(issue.code);
            if (!issue.where.empty()) {
                out += " at ";
                out += issue.where;
            }
            out += ": ";
            out += issue.message;
        }
        return out;
    }

    std::vector<Issue> issues_;
};

} // namespace mzi
