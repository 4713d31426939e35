// SPDX-License-Identifier: Apache-2.0
//
// csifb - CSI feedback simulator for wideband FDD massive MIMO
// Copyright (C) 2026 The csifb authors
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

#ifndef CSIFB_TYPES_HPP
#define CSIFB_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace csifb
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    // Rows of a 1 x n complex row vector (pilot observations, feedback symbols).
    using CRow = Eigen::RowVectorXcd;

    // Configuration or argument outside the documented domain.
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Requested distortion (or budget) cannot be reached.
    class InfeasibleError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // A linear solve or eigendecomposition failed. Carries the condition
    // number estimate of the offending matrix.
    class NumericalError : public std::runtime_error
    {
    public:
        NumericalError(const std::string &what, double condition)
            : std::runtime_error(what + " (condition number ~ " + std::to_string(condition) + ")"),
              condition_(condition)
        {
        }
        double condition() const noexcept { return condition_; }

    private:
        double condition_;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
} // namespace csifb

#endif
