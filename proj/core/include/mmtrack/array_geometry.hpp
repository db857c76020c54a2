// SPDX-License-Identifier: Apache-2.0
//
// mmtrack - mmWave cluster tracking analysis toolkit
// Copyright (C) 2026 The mmtrack Authors
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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace mmtrack {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Half-wavelength uniform linear array. Element spacing is fixed, only the size varies.
struct ArraySpec {
    std::size_t num_elements = 1;

    void validate() const;
};

// Throws DomainError unless angle is in [-pi/2, pi/2]. The label is used in the message.
void check_angle(double angle, const char *label = "angle");

bool angle_in_domain(double angle);

// a(angle)_k = exp(j*pi*k*sin(angle)), k = 0..N-1
CVec steering_vector(double angle, const ArraySpec &spec);

// d a(angle) / d angle, element k = j*pi*k*cos(angle) * a_k
CVec steering_derivative(double angle, const ArraySpec &spec);

} // namespace mmtrack
