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

// Reference computations for tests. Everything here is written from the
// defining formulas with dense linear algebra or bisection and shares no code
// path with the library beyond the basic types.

#ifndef CSIFB_TESTS_ORACLE_HPP
#define CSIFB_TESTS_ORACLE_HPP

#include "csifb/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

namespace oracle
{
    using csifb::cplx;
    using csifb::CMat;
    using csifb::CVec;

    inline CVec steer(double theta, int M)
    {
        CVec a(M);
        for (int m = 0; m < M; ++m)
            a(m) = std::exp(cplx(0.0, std::numbers::pi * m * std::sin(theta)));
        return a;
    }

    inline CVec delay(double tau, int N, double f_s)
    {
        CVec b(N);
        for (int n = 0; n < N; ++n)
            b(n) = std::exp(cplx(0.0, -2.0 * std::numbers::pi * n * f_s * tau));
        return b;
    }

    /// vec(a b^T) with the antenna index fastest.
    inline CVec outer_vec(const CVec &a, const CVec &b)
    {
        CVec v(a.size() * b.size());
        for (Eigen::Index n = 0; n < b.size(); ++n)
            for (Eigen::Index m = 0; m < a.size(); ++m)
                v(n * a.size() + m) = a(m) * b(n);
        return v;
    }

    inline CMat multipath_covariance(const std::vector<double> &angles, const std::vector<double> &delays, int M,
                                     int N, double f_s)
    {
        CMat s = CMat::Zero(static_cast<Eigen::Index>(M) * N, static_cast<Eigen::Index>(M) * N);
        for (size_t l = 0; l < angles.size(); ++l)
        {
            const CVec v = outer_vec(steer(angles[l], M), delay(delays[l], N, f_s));
            s += v * v.adjoint();
        }
        return s;
    }

    /// Sigma_h X (X^H Sigma_h X + I)^-1 X^H Sigma_h via an explicit inverse.
    inline CMat posterior_covariance(const CMat &sigma, const CMat &x)
    {
        const CMat g = x.adjoint() * sigma * x + CMat::Identity(x.cols(), x.cols());
        return sigma * x * g.inverse() * x.adjoint() * sigma;
    }

    inline CMat lmmse_gain(const CMat &sigma, const CMat &x)
    {
        const CMat g = x.adjoint() * sigma * x + CMat::Identity(x.cols(), x.cols());
        return sigma * x * g.inverse();
    }

    /// Water level for sum min(gamma, lambda) = excess by bisection.
    inline double water_level_bisect(const std::vector<double> &eig, double excess)
    {
        double lo = 0.0;
        double hi = *std::max_element(eig.begin(), eig.end());
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            double d = 0.0;
            for (double l : eig)
                d += std::min(mid, l);
            (d < excess ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    inline double rate_at_level(const std::vector<double> &eig, double gamma)
    {
        double r = 0.0;
        for (double l : eig)
            if (l > gamma)
                r += std::log2(l / gamma);
        return r;
    }

    /// Distortion for a rate by bisection on log(gamma).
    inline double distortion_bisect(const std::vector<double> &eig, double rate)
    {
        double lo = -700.0, hi = std::log(*std::max_element(eig.begin(), eig.end()));
        for (int it = 0; it < 300; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (rate_at_level(eig, std::exp(mid)) > rate ? lo : hi) = mid;
        }
        const double gamma = std::exp(0.5 * (lo + hi));
        double d = 0.0;
        for (double l : eig)
            d += std::min(gamma, l);
        return d;
    }

    /// Plug-in entropy of a sample in bits.
    template <class T>
    double plugin_entropy(const std::vector<T> &xs)
    {
        std::map<T, long long> counts;
        for (const T &x : xs)
            ++counts[x];
        double h = 0.0;
        const double n = static_cast<double>(xs.size());
        for (const auto &[k, c] : counts)
        {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log2(p);
        }
        return h;
    }

    /// One-sample Kolmogorov-Smirnov statistic against U[lo, hi].
    inline double ks_uniform(std::vector<double> xs, double lo, double hi)
    {
        std::sort(xs.begin(), xs.end());
        const double n = static_cast<double>(xs.size());
        double d = 0.0;
        for (size_t i = 0; i < xs.size(); ++i)
        {
            const double f = std::clamp((xs[i] - lo) / (hi - lo), 0.0, 1.0);
            d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
        }
        return d;
    }

    /// Least-squares slope of y on x.
    inline double ls_slope(const std::vector<double> &x, const std::vector<double> &y)
    {
        const double n = static_cast<double>(x.size());
        double mx = 0, my = 0;
        for (size_t i = 0; i < x.size(); ++i)
        {
            mx += x[i];
            my += y[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0, sxy = 0;
        for (size_t i = 0; i < x.size(); ++i)
        {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        return sxy / sxx;
    }
} // namespace oracle

#endif
