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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bounds.hpp"
#include "doctest.h"
#include "special_functions.hpp"
#include "support.hpp"

using namespace zzopt;

namespace {

double prior_variance(const OfdmConfig& cfg) {
    const double ts = cfg.sample_period();
    return ts * ts * cfg.na * cfg.na / 12.0;
}

BoundQuery make_query(DetectionScheme scheme, double gamma, const OfdmConfig& cfg,
                      int n_points = 4096) {
    BoundQuery q;
    q.scheme = scheme;
    q.gamma = gamma;
    q.cfg = cfg;
    q.quad.n_points = n_points;
    return q;
}

}  // namespace

TEST_CASE("quadrature spec validation") {
    QuadratureSpec s;
    CHECK_NOTHROW(s.validate());
    s.n_points = 63;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.n_points = 101;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // Simpson needs even
    s.rule = QuadratureSpec::Rule::Trapezoid;
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("noncoherent detector amplitudes") {
    for (double g : {0.1, 1.0, 30.0, 1000.0}) {
        for (double lam : {0.0, 1e-6, 0.3, 0.9, 1.0}) {
            const auto [a, b] = AbPair::from_acf(g, lam);
            CHECK(a >= 0.0);
            CHECK(a <= b);
            CHECK(a * a + b * b == doctest::Approx(g).epsilon(1e-12));
            CHECK(a * b == doctest::Approx(0.5 * g * std::sqrt(lam)).epsilon(1e-9));
        }
    }
}

TEST_CASE("coherent error probability point values") {
    const OfdmConfig cfg = OfdmConfig::make(64, 15625.0, 16.0);
    const auto uni = PowerAllocation::uniform(64);
    BoundQuery q = make_query(DetectionScheme::Coherent, 4.0, cfg);
    CHECK(pmin_coherent(0.0, uni.rho, q) == doctest::Approx(0.5));
    CHECK(pmin_coherent_acf(4.0, 0.0) == doctest::Approx(gaussian_q(2.0)).epsilon(1e-14));
    CHECK(pmin_coherent_acf(4.0, 0.0) == doctest::Approx(0.02275013).epsilon(1e-6));
    q.gamma = 0.0;
    CHECK(pmin_coherent(3.7, uni.rho, q) == doctest::Approx(0.5));
}

TEST_CASE("noncoherent error probability point values") {
    CHECK(pmin_noncoherent_acf(5.0, 1.0) == doctest::Approx(0.5));
    CHECK(pmin_noncoherent_acf(2.0, 0.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-10));
    CHECK(pmin_noncoherent_acf(0.0, 0.3) == doctest::Approx(0.5));
    // Orthogonal-signal closed form 1/2 exp(-gamma/2) across magnitudes.
    for (double g : {0.1, 1.0, 10.0, 100.0, 1000.0})
        CHECK(pmin_noncoherent_acf(g, 0.0) ==
              doctest::Approx(0.5 * std::exp(-0.5 * g)).epsilon(1e-9));
}

TEST_CASE("error probabilities live in (0, 1/2] and decrease with SNR") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ulam(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double lam = ulam(rng);
        double prev_c = 0.51, prev_n = 0.51;
        for (double g : {0.0, 0.5, 2.0, 8.0, 32.0, 128.0, 1000.0}) {
            const double pc = pmin_coherent_acf(g, lam);
            const double pn = pmin_noncoherent_acf(g, lam * lam);
            CHECK(pc > 0.0);
            CHECK(pc <= 0.5);
            CHECK(pn >= 0.0);
            CHECK(pn <= 0.5);
            CHECK(pc <= prev_c + 1e-12);
            CHECK(pn <= prev_n + 1e-9);
            prev_c = pc;
            prev_n = pn;
        }
    }
}

TEST_CASE("zero-SNR bound equals the prior variance") {
    const OfdmConfig cfg = OfdmConfig::make(64, 15625.0, 16.0);
    const auto uni = PowerAllocation::uniform(64);
    for (auto scheme : {DetectionScheme::Coherent, DetectionScheme::Noncoherent}) {
        const BoundQuery q = make_query(scheme, 0.0, cfg);
        CHECK(zzb(uni.rho, q) == doctest::Approx(prior_variance(cfg)).epsilon(1e-9));
    }
}

TEST_CASE("bound against a refined trapezoid oracle") {
    const OfdmConfig cfg = OfdmConfig::make(64, 15625.0, 16.0);
    const auto uni = PowerAllocation::uniform(64);
    const BoundQuery q = make_query(DetectionScheme::Coherent, 100.0, cfg);
    BoundQuery oracle = q;
    oracle.quad.n_points = 65536;
    oracle.quad.rule = QuadratureSpec::Rule::Trapezoid;
    const double got = zzb(uni.rho, q);
    const double want = zzb(uni.rho, oracle);
    CHECK(testsupport::rel_err(got, want) <= 5e-6);
}

TEST_CASE("quadrature refinement stability at the default spec") {
    const OfdmConfig cfg = OfdmConfig::make(64, 15625.0, 16.0);
    const auto uni = PowerAllocation::uniform(64);
    for (auto scheme : {DetectionScheme::Coherent, DetectionScheme::Noncoherent}) {
        const BoundQuery q = make_query(scheme, 50.0, cfg, 4096);
        const BoundQuery q2 = make_query(scheme, 50.0, cfg, 8192);
        CHECK(testsupport::rel_err(zzb(uni.rho, q), zzb(uni.rho, q2)) < 1e-6);
    }
}

TEST_CASE("bound below prior variance and nonincreasing in SNR") {
    const OfdmConfig cfg = OfdmConfig::make(16, 15625.0, 4.0);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const auto rho = testsupport::random_simplex(16, 1.0, rng);
        for (auto scheme : {DetectionScheme::Coherent, DetectionScheme::Noncoherent}) {
            double prev = prior_variance(cfg) * (1.0 + 1e-12);
            for (double g : {0.0, 0.3, 3.0, 30.0, 300.0}) {
                const double v = zzb(rho, make_query(scheme, g, cfg, 512));
                CHECK(v <= prior_variance(cfg) * (1.0 + 1e-12));
                CHECK(v <= prev * (1.0 + 1e-12));
                prev = v;
            }
        }
    }
}

TEST_CASE("CRLB point values and failure modes") {
    OfdmConfig cfg = OfdmConfig::make(64, 1.0, 16.0);
    PowerAllocation pair = PowerAllocation::zeros(64);
    pair.rho[1] = 0.5;
    pair.rho[63] = 0.5;  // second moment of d equals 1
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(crlb(pair.rho, 1.0, cfg) == doctest::Approx(1.0 / (8.0 * pi2)).epsilon(1e-12));

    // Uniform allocation: second moment = (sum of d^2) / 64 = 21856 / 64.
    double sum_d2 = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double d = subcarrier_distance(k, 64);
        sum_d2 += d * d;
    }
    CHECK(sum_d2 == doctest::Approx(21856.0));
    cfg = OfdmConfig::make(64, 15625.0, 16.0);
    const auto uni = PowerAllocation::uniform(64);
    const double want = 1.0 / (8.0 * pi2 * 10.0 * cfg.delta_f * cfg.delta_f * 341.5);
    CHECK(crlb(uni.rho, 10.0, cfg) == doctest::Approx(want).epsilon(1e-12));

    PowerAllocation dc = PowerAllocation::zeros(64);
    dc.rho[0] = 1.0;
    CHECK_THROWS_AS(crlb(dc.rho, 10.0, cfg), std::domain_error);
    CHECK_THROWS_AS(crlb(uni.rho, 0.0, cfg), std::domain_error);
}

TEST_CASE("shared table matches per-call evaluation") {
    const OfdmConfig cfg = OfdmConfig::make(16, 15625.0, 4.0);
    const BoundQuery q = make_query(DetectionScheme::Noncoherent, 12.0, cfg, 512);
    const AcfTable table(cfg, q.quad);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto rho = testsupport::random_simplex(16, 1.0, rng);
        CHECK(zzb(rho, q, table) == doctest::Approx(zzb(rho, q)).epsilon(1e-15));
    }
}
