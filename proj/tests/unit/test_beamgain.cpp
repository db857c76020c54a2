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
#include "mmtrack/beamgain.hpp"
#include "mmtrack/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mmtrack;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

// Composite Simpson integral of the beam level times the Gaussian offset density.
double gain_by_quadrature(double eps, double width, double sigma)
{
    const double lo = eps - width / 2.0;
    const double hi = eps + width / 2.0;
    const int n = 20000;
    const double h = (hi - lo) / n;
    auto pdf = [sigma](double x) { return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi)); };
    double s = pdf(lo) + pdf(hi);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * pdf(lo + i * h);
    return (kPi / width) * s * h / 3.0;
}

double in_beam_mean(const CVec &w, double width, double center, const ArraySpec &spec)
{
    double sum = 0.0;
    int n = 0;
    for (double a = center - width / 2.0; a <= center + width / 2.0 + 1e-12; a += 0.01 * kDeg, ++n)
        sum += pattern_gain(w, a, spec);
    return sum / n;
}

} // namespace

TEST_CASE("ideal beam is rectangular with inclusive edges")
{
    const BeamSpec beam{10.0 * kDeg, 0.0};
    CHECK(ideal_gain(0.0, beam) == std::sqrt(kPi / beam.width));
    CHECK(ideal_gain(beam.width / 2.0, beam) == std::sqrt(kPi / beam.width));
    CHECK(ideal_gain(-beam.width / 2.0, beam) == std::sqrt(kPi / beam.width));
    CHECK(ideal_gain(beam.width / 2.0 + 1e-9, beam) == 0.0);
    CHECK(ideal_gain(0.3, BeamSpec{10.0 * kDeg, 0.25}) == std::sqrt(kPi / beam.width));
    CHECK_THROWS_AS(ideal_gain(0.0, BeamSpec{0.0, 0.0}), ConfigError);
}

TEST_CASE("instantaneous gain examples")
{
    const BeamSpec rx{10.0 * kDeg, 0.1};
    const BeamSpec tx{20.0 * kDeg, -0.2};
    const double full = (kPi / rx.width) * (kPi / tx.width);
    CHECK(instantaneous_gain({0.1, -0.2, 1.0}, RayParams::coherent({0.7}), rx, tx) == doctest::Approx(full));

    RayParams two = RayParams::coherent({0.3, 0.3});
    CHECK(instantaneous_gain({0.1, -0.2, 1.0}, two, rx, tx) == doctest::Approx(2.0 * full));

    two.offsets_aoa[1] = 0.5; // second ray leaves the receive beam
    CHECK(instantaneous_gain({0.1, -0.2, 1.0}, two, rx, tx) == doctest::Approx(0.5 * full));
    two.offsets_aoa[0] = -0.5;
    CHECK(instantaneous_gain({0.1, -0.2, 1.0}, two, rx, tx) == 0.0);
}

TEST_CASE("line of sight Monte Carlo is deterministic")
{
    const GainEstimate g = avg_gain_mc(2.0 * kDeg, 1.0 * kDeg, 10.0 * kDeg, 10.0 * kDeg,
                                       SpreadModel::line_of_sight(), 1000, 3);
    CHECK(g.mean == doctest::Approx((kPi / (10.0 * kDeg)) * (kPi / (10.0 * kDeg))).epsilon(1e-13));
    CHECK(g.std_error == 0.0);
    CHECK(g.draws == 1000);
}

TEST_CASE("Monte Carlo agrees with the closed form")
{
    const GainEstimate g = avg_gain_mc(0.0, 0.0, 10.0 * kDeg, kPi, SpreadModel{5.0 * kDeg, 0.0, 20}, 100000, 11);
    const double closed = avg_gain_closed(0.0, 0.0, 10.0 * kDeg, kPi, 5.0 * kDeg, 0.0);
    CHECK(std::abs(g.mean - closed) <= 3.0 * g.std_error);

    // Both factors active.
    const GainEstimate g2 = avg_gain_mc(3.0 * kDeg, -2.0 * kDeg, 10.0 * kDeg, 15.0 * kDeg,
                                        SpreadModel{4.0 * kDeg, 3.0 * kDeg, 20}, 100000, 12);
    const double closed2 = avg_gain_closed(3.0 * kDeg, -2.0 * kDeg, 10.0 * kDeg, 15.0 * kDeg, 4.0 * kDeg, 3.0 * kDeg);
    CHECK(std::abs(g2.mean - closed2) <= 3.0 * g2.std_error);
}

TEST_CASE("standard error halves when draws quadruple and shrinks by sqrt(2) when doubled")
{
    const SpreadModel spread{5.0 * kDeg, 0.0, 20};
    const double e1 = avg_gain_mc(2.0 * kDeg, 0.0, 10.0 * kDeg, kPi, spread, 20000, 5).std_error;
    const double e2 = avg_gain_mc(2.0 * kDeg, 0.0, 10.0 * kDeg, kPi, spread, 40000, 6).std_error;
    CHECK(e2 / e1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("closed form limits and values")
{
    for (double w : {2.0, 5.0, 10.0, 40.0})
        CHECK(average_beam_factor(0.0, w * kDeg, 0.0) == kPi / (w * kDeg));
    CHECK(average_beam_factor(6.0 * kDeg, 10.0 * kDeg, 0.0) == 0.0);

    const double g = average_beam_factor(0.0, 10.0 * kDeg, 5.0 * kDeg);
    CHECK(g == doctest::Approx(12.29).epsilon(0.05 / 12.29));
    CHECK(g == doctest::Approx((kPi / (10.0 * kDeg)) * std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-14));
    CHECK(g == doctest::Approx(gain_by_quadrature(0.0, 10.0 * kDeg, 5.0 * kDeg)).epsilon(1e-9));

    const double wide = average_beam_factor(7.0 * kDeg, 20.0 * kDeg, 5.0 * kDeg);
    const double narrow = average_beam_factor(7.0 * kDeg, 2.0 * kDeg, 5.0 * kDeg);
    CHECK(wide == doctest::Approx(gain_by_quadrature(7.0 * kDeg, 20.0 * kDeg, 5.0 * kDeg)).epsilon(1e-9));
    CHECK(narrow == doctest::Approx(gain_by_quadrature(7.0 * kDeg, 2.0 * kDeg, 5.0 * kDeg)).epsilon(1e-9));
    CHECK(wide > narrow);
    CHECK(wide == doctest::Approx(6.5).epsilon(0.02));
    CHECK(narrow == doctest::Approx(5.4).epsilon(0.02));

    // Far tail keeps relative precision.
    const double far = average_beam_factor(10.0 * kDeg, 2.0 * kDeg, 1.0 * kDeg);
    CHECK(far > 0.0);
    CHECK(far < 1e-15);
    CHECK(far == doctest::Approx(gain_by_quadrature(10.0 * kDeg, 2.0 * kDeg, 1.0 * kDeg)).epsilon(1e-6));
}

TEST_CASE("normal cdf")
{
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(1.0) - normal_cdf(-1.0) == doctest::Approx(0.682689492137).epsilon(1e-12));
}

TEST_CASE("synthesized beams have unit norm and reach the ideal level within 3 dB")
{
    const ArraySpec spec{32};
    CHECK(min_beam_width(spec) == doctest::Approx(0.8 * kPi / 32.0));
    for (double width : {2.0 * kPi / 32.0, 6.4 * kDeg})
        for (double center : {0.0, 30.0 * kDeg, -50.0 * kDeg})
        {
            const CVec w = synthesized_beam(width, center, spec);
            CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
            const double ratio_db = 10.0 * std::log10(in_beam_mean(w, width, center, spec) / (kPi / width));
            CHECK(std::abs(ratio_db) < 3.0);
        }
    CHECK_THROWS_AS(synthesized_beam(0.5 * min_beam_width(spec), 0.0, spec), ConfigError);
    CHECK_THROWS_AS(synthesized_beam(10.0 * kDeg, 2.0, spec), DomainError);
}

TEST_CASE("steering a beam off broadside shifts its pattern in sine space")
{
    const ArraySpec spec{32};
    for (double width : {5.0 * kDeg, 10.0 * kDeg})
    {
        const double c = 10.0 * kDeg;
        const CVec b0 = synthesized_beam(width, 0.0, spec);
        const CVec bc = synthesized_beam(width, c, spec);
        double worst = 0.0;
        double peak = 0.0;
        for (double u = -0.3; u <= 0.3; u += 0.001)
        {
            const double g0 = pattern_gain(b0, std::asin(u), spec);
            const double gc = pattern_gain(bc, std::asin(std::sin(c) + u), spec);
            worst = std::max(worst, std::abs(g0 - gc));
            peak = std::max(peak, g0);
        }
        CHECK(worst < 0.05 * peak);
    }
}

TEST_CASE("pattern gain identities")
{
    const ArraySpec spec{32};
    const CVec matched = steering_vector(0.4, spec);
    CHECK(pattern_gain(matched / std::sqrt(32.0), 0.4, spec) == doctest::Approx(32.0).epsilon(1e-13));

    // DFT beams at u = 0 and u = 2/32 are orthogonal.
    const CVec dft = steering_vector(std::asin(2.0 / 32.0), spec) / std::sqrt(32.0);
    CHECK(pattern_gain(dft, 0.0, spec) < 1e-10);

    // Mean over a uniform sine grid of 4N points equals the weight energy.
    RngStream rng(4);
    CVec w(32);
    for (Eigen::Index k = 0; k < 32; ++k)
        w(k) = cdouble(rng.normal(1.0), rng.normal(1.0));
    w.normalize();
    double sum = 0.0;
    const int grid = 128;
    for (int i = 0; i < grid; ++i)
        sum += pattern_gain(w, std::asin(-1.0 + 2.0 * i / grid), spec);
    CHECK(sum / grid == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("synthesizer is shared per array size")
{
    CHECK(&beam_synthesizer({16}) == &beam_synthesizer({16}));
    CHECK(&beam_synthesizer({16}) != &beam_synthesizer({32}));
}
