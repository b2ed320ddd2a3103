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
 * JSON helpers for scenario and report documents: a strict object reader
 * that reports offending keys by JSON-pointer path, complex-number codecs,
 * and a writer that prints every double with 17 significant digits.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mzi/errors.hpp"

namespace mzi::json_io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] inline void schema_error(const std::string &path, const std::string &message) {
    throw Error(ErrorCode::SchemaError, path.empty() ? "/" : path, message);
}

inline std::string child_path(const std::string &path, std::string_view key) {
    return path + "/" + std::string(key);
}

inline std::string child_path(const std::string &path, std::size_t index) {
    return path + "/" + std::to_string(index);
}

/// View over a JSON object that tracks consumed keys; finish() rejects any
/// key that was never read.
class ObjectReader {
  public:
    ObjectReader(const json &value, std::string path) : value_(value), path_(std::move(path)) {
        if (!value_.is_object()) {
            schema_error(path_, "expected an object");
        }
    }

    [[nodiscard]] const std::string &path() const { return path_; }

    [[nodiscard]] bool has(std::string_view key) const {
        return value_.contains(std::string(key));
    }

    const json &required(std::string_view key) {
        const std::string k(key);
        if (!value_.contains(k)) {
            schema_error(child_path(path_, key), "missing required key");
        }
        seen_.insert(k);
        return value_.at(k);
    }

    const json *optional(std::string_view key) {
        const std::string k(key);
        if (!value_.contains(k)) {
            return nullptr;
        }
        seen_.insert(k);
        return &value_.at(k);
    }

    void finish() const {
        for (const auto &item : value_.items()) {
            if (!seen_.contains(item.key())) {
                schema_error(child_path(path_, item.key()), "unknown key");
            }
        }
    }

  private:
    const json &value_;
    std::string path_;
    std::set<std::string> seen_;
};

inline double as_number(const json &v, const std::string &path) {
    if (!v.is_number()) {
        schema_error(path, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        schema_error(path, "number must be finite");
    }
    return d;
}

inline std::string as_string(const json &v, const std::string &path) {
    if (!v.is_string()) {
        schema_error(path, "expected a string");
    }
    return v.get<std::string>();
}

inline std::int64_t as_integer(const json &v, const std::string &path) {
    if (!v.is_number_integer()) {
        schema_error(path, "expected an integer");
    }
    return v.get<std::int64_t>();
}

inline std::uint64_t as_unsigned(const json &v, const std::string &path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        schema_error(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

inline const json &as_array(const json &v, const std::string &path) {
    if (!v.is_array()) {
        schema_error(path, "expected an array");
    }
    return v;
}

/// A complex number is {"re": x, "im": y} (either part optional) or a bare
/// real number.
inline std::complex<double> as_complex(const json &v, const std::string &path) {
    if (v.is_number()) {
        return {as_number(v, path), 0.0};
    }
    ObjectReader obj(v, path);
    double re = 0.0;
    double im = 0.0;
    if (const auto *x = obj.optional("re")) {
        re = as_number(*x, child_path(path, "re"));
    }
    if (const auto *y = obj.optional("im")) {
        im = as_number(*y, child_path(path, "im"));
    }
    obj.finish();
    return {re, im};
}

inline ordered_json complex_to_json(std::complex<double> z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

inline std::string format_double(double d) {
    if (!std::isfinite(d)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

namespace detail {

template <class Json>
void write(std::ostream &os, const Json &v, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent >= 0) {
            os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    const char *sep = indent >= 0 ? ": " : ":";
    switch (v.type()) {
    case nlohmann::json::value_t::object: {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) {
                os << ',';
            }
            first = false;
            newline(depth + 1);
            os << Json(it.key()).dump() << sep;
            write(os, it.value(), indent, depth + 1);
        }
        newline(depth);
        os << '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (v.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        bool first = true;
        for (const auto &item : v) {
            if (!first) {
                os << ',';
            }
            first = false;
            newline(depth + 1);
            write(os, item, indent, depth + 1);
        }
        newline(depth);
        os << ']';
        return;
    }
    case nlohmann::json::value_t::number_float:
        os << format_double(v.template get<double>());
        return;
    default:
        os << v.dump();
        return;
    }
}

} // namespace detail

/// Serializes with floats at 17 significant digits so doubles round-trip
/// exactly. `indent` < 0 gives compact output.
template <class Json> std::string dump(const Json &v, int indent = 2) {
    std::ostringstream os;
    detail::write(os, v, indent, 0);
    return os.str();
}

} // namespace mzi::json_io
