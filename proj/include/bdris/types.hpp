// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The bdris-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bdris
{
    using cplx = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    // Base of every error thrown by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Scalar argument outside its mathematical domain (e.g. non-positive distance).
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    // Operand shapes do not fit together.
    class DimensionError : public Error
    {
    public:
        using Error::Error;
    };

    // Input that makes a normalization or projection undefined (zero matrix, all-zero gains).
    class DegenerateError : public Error
    {
    public:
        using Error::Error;
    };

    // A matrix that must be inverted is singular or rank deficient.
    class SingularityError : public Error
    {
    public:
        using Error::Error;
    };

    // Invalid configuration value or file.
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    inline void require_square(const CMatrix &m, const char *what)
    {
        if (m.rows() != m.cols())
            throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }

    // Column-major vectorization, vec(X).
    inline CVector vec(const CMatrix &m)
    {
        return Eigen::Map<const CVector>(m.data(), m.size());
    }

    inline CMatrix reshape(const CVector &v, Eigen::Index rows, Eigen::Index cols)
    {
        if (v.size() != rows * cols)
            throw DimensionError("reshape: size mismatch");
        return Eigen::Map<const CMatrix>(v.data(), rows, cols);
    }
} // namespace bdris
