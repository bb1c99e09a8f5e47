// Copyright 2026 The esscher authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// JSON wire formats: complex scalars as [re, im], matrices as row-major
// nested arrays, density operators as either a matrix or a purification
// state vector.

#include <string>

#include <nlohmann/json.hpp>

#include "esscher/numerics.hpp"

namespace esscher::io {

using json = nlohmann::json;

/// Structured parse/validation failure with a JSON-pointer-style path.
struct ConfigError : Error {
    ConfigError(const std::string& path, const std::string& msg)
        : Error("config error at '" + path + "': " + msg) {}
};

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ConfigError(path, "expected a number or [re, im]");
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty nested array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) throw ConfigError(path + "[0]", "expected an array row");
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ConfigError(path + "[" + std::to_string(i) + "]", "ragged matrix row");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                        path + "[" + std::to_string(i) + "][" +
                                            std::to_string(c) + "]");
    }
    return m;
}

inline json real_vector_to_json(const RealVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline RealVector real_vector_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

inline json real_matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline RealMatrix real_matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty nested array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw ConfigError(path + "[0]", "expected an array row");
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ConfigError(path + "[" + std::to_string(i) + "]", "ragged matrix row");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number())
                throw ConfigError(path + "[" + std::to_string(i) + "][" + std::to_string(c) + "]",
                                  "expected a number");
            m(i, c) = cell.get<double>();
        }
    }
    return m;
}

inline json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

inline Vector vector_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) =
            complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

inline const json& require_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "." + key, "missing required field");
    return j.at(key);
}

inline double require_number(const json& j, const std::string& key, const std::string& path) {
    const json& v = require_field(j, key, path);
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    return v.get<double>();
}

}  // namespace esscher::io
