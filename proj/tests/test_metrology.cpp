#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "censpin/metrology.hpp"

using namespace censpin;

namespace {

constexpr double kPi = 3.14159265358979323846;

double frob_distance(const HermitianOperator& a, const HermitianOperator& b) {
    return (a.to_dense() - b.to_dense()).norm();
}

// G projected onto the three-operator family spanning the no-Zeeman generator.
struct ProjectedCoeffs {
    double alpha;
    double beta;
    double gamma;
    double residual;
};

ProjectedCoeffs project_generator(const HermitianOperator& g, const HilbertSpace& space) {
    auto iy = collective_op(space, Axis::Y, WhichSpins::Ring);
    auto sz = collective_op(space, Axis::Z, WhichSpins::Central);
    auto iz = collective_op(space, Axis::Z, WhichSpins::Ring);
    auto ix = collective_op(space, Axis::X, WhichSpins::Ring);
    DenseMatrix szm = sz.to_dense();
    HermitianOperator szz(space, DenseMatrix(szm * iz.to_dense()));
    HermitianOperator szx(space, DenseMatrix(szm * ix.to_dense()));

    // The three basis operators are mutually Frobenius-orthogonal, so the
    // projection decouples into independent inner products.
    const double a = g.frobenius_inner(iy).real() / iy.frobenius_inner(iy).real();
    const double b = g.frobenius_inner(szz).real() / szz.frobenius_inner(szz).real();
    const double c = g.frobenius_inner(szx).real() / szx.frobenius_inner(szx).real();

    auto model = a * iy + b * szz + c * szx;
    return {a, b, c, frob_distance(g, model)};
}

}  // namespace

TEST_CASE("precession frequency and the preset sensing times") {
    CHECK(precession_omega(1.0, 1.0) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));
    CHECK(precession_omega(2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sensing_time(1.0, 1.0, SensingKind::LocalEpf) == doctest::Approx(2.809926).epsilon(1e-6));
    CHECK(sensing_time(1.0, 1.0, SensingKind::GlobalQfi) == doctest::Approx(5.619852).epsilon(1e-6));
    CHECK(sensing_time(2.0, 0.0, SensingKind::GlobalQfi) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(sensing_time(1.0, 1.0, SensingKind::GlobalQfi) ==
          doctest::Approx(2.0 * sensing_time(1.0, 1.0, SensingKind::LocalEpf)).epsilon(1e-14));
}

TEST_CASE("analytic generator coefficients") {
    SUBCASE("everything vanishes at t = 0") {
        auto c = generator_coeffs_analytic(1.0, 1.0, 0.0);
        CHECK(std::abs(c.alpha) < 1e-14);
        CHECK(std::abs(c.beta) < 1e-14);
        CHECK(std::abs(c.gamma) < 1e-14);
    }

    SUBCASE("one full precession period closes the transverse component") {
        const double t0 = sensing_time(1.0, 1.0, SensingKind::GlobalQfi);
        auto c = generator_coeffs_analytic(1.0, 1.0, t0);
        CHECK(c.alpha == doctest::Approx(-4.49588143).epsilon(1e-7));
        CHECK(c.beta == doctest::Approx(4.49588143).epsilon(1e-7));
        CHECK(std::abs(c.gamma) < 1e-12);
        CHECK(c.omega == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));
        CHECK(c.t == doctest::Approx(t0).epsilon(1e-14));
    }

    SUBCASE("period coefficients reduce to -2 pi h^2 / Omega^3 and 2 pi A h / Omega^3") {
        for (double a : {0.7, 1.0, 2.3}) {
            for (double h : {0.0, 0.4, 1.9}) {
                const double omega = precession_omega(a, h);
                auto c = generator_coeffs_analytic(a, h, 2.0 * kPi / omega);
                const double omega3 = omega * omega * omega;
                CHECK(c.alpha == doctest::Approx(-2.0 * kPi * h * h / omega3).epsilon(1e-12));
                CHECK(c.beta == doctest::Approx(2.0 * kPi * a * h / omega3).epsilon(1e-12));
                CHECK(std::abs(c.gamma) < 1e-12);
            }
        }
    }

    SUBCASE("generic time keeps the transverse component open") {
        const double a = 1.3;
        const double h = 0.8;
        const double t = 1.7;
        const double omega = precession_omega(a, h);
        auto c = generator_coeffs_analytic(a, h, t);
        CHECK(c.gamma ==
              doctest::Approx(a * (std::cos(omega * t) - 1.0) / (omega * omega)).epsilon(1e-12));
        CHECK(std::abs(c.gamma) > 0.1);
    }
}

TEST_CASE("exact generator matches its closed-form decomposition") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> t_dist(0.1, 10.0);

    for (int n : {2, 4, 6}) {
        auto space = HilbertSpace::collective_sector(n);
        auto spec = ModelSpec::collective_no_zeeman(n, 1.0, 1.0);
        auto ham = build_hamiltonian(spec, space);
        auto h1 = field_derivative(spec, space);

        // Leading order in t the integral is t * H1.
        auto g_small = generator_exact(ham, h1, 1e-6);
        CHECK(frob_distance(g_small, 1e-6 * h1) < 1e-5 * 1e-6 * h1.frobenius_norm());

        for (int trial = 0; trial < 5; ++trial) {
            const double t = t_dist(rng);
            CAPTURE(n);
            CAPTURE(t);
            auto g = generator_exact(ham, h1, t);
            CHECK(g.is_hermitian());

            auto c = generator_coeffs_analytic(1.0, 1.0, t);
            auto iy = collective_op(space, Axis::Y, WhichSpins::Ring);
            auto sz = collective_op(space, Axis::Z, WhichSpins::Central);
            auto iz = collective_op(space, Axis::Z, WhichSpins::Ring);
            auto ix = collective_op(space, Axis::X, WhichSpins::Ring);
            auto model = c.alpha * iy +
                         c.beta * HermitianOperator(space, DenseMatrix(sz.to_dense() * iz.to_dense())) +
                         c.gamma * HermitianOperator(space, DenseMatrix(sz.to_dense() * ix.to_dense()));
            CHECK(frob_distance(g, model) < 1e-10);

            // The generator lives in the S_z-conserving sector.
            DenseMatrix gd = g.to_dense();
            DenseMatrix szd = sz.to_dense();
            CHECK((gd * szd - szd * gd).cwiseAbs().maxCoeff() < 1e-10);

            auto projected = project_generator(g, space);
            CHECK(std::abs(projected.alpha - c.alpha) < 1e-10);
            CHECK(std::abs(projected.beta - c.beta) < 1e-10);
            CHECK(std::abs(projected.gamma - c.gamma) < 1e-10);
            CHECK(projected.residual < 1e-10);
        }
    }
}

TEST_CASE("QFI from the generator: eigenstates, single-term generators, the period value") {
    auto space = HilbertSpace::collective_sector(10);
    auto stretched = probe_state(space, ProbeKind::RingZStretched);

    SUBCASE("generator eigenstates carry no information") {
        auto iz = collective_op(space, Axis::Z, WhichSpins::Ring);
        Vector up = Vector::Zero(space.dim());
        up[space.collective_index(0, 0)] = 1.0;
        CHECK(qfi_from_generator(iz, StateVector(space, up)) == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("a pure I_y generator gives 2 alpha^2 I on the stretched probe") {
        const double alpha = -1.7;
        auto g = alpha * collective_op(space, Axis::Y, WhichSpins::Ring);
        CHECK(qfi_from_generator(g, stretched) ==
              doctest::Approx(2.0 * alpha * alpha * 5.0).epsilon(1e-12));
    }

    SUBCASE("full period generator reproduces the closed-form QFI") {
        auto spec = ModelSpec::collective_no_zeeman(10, 1.0, 1.0);
        auto ham = build_hamiltonian(spec, space);
        auto h1 = field_derivative(spec, space);
        const double t0 = sensing_time(1.0, 1.0, SensingKind::GlobalQfi);
        auto g = generator_exact(ham, h1, t0);

        CHECK(std::abs(expectation(g, stretched)) < 1e-10);
        const double f = qfi_from_generator(g, stretched);
        CHECK(f == doctest::Approx(707.45324).epsilon(1e-6));
        CHECK(f == doctest::Approx(qfi_analytic_t0(1.0, 1.0, 10)).epsilon(1e-10));
    }
}

TEST_CASE("finite-difference QFI pipeline") {
    const double t0 = sensing_time(1.0, 1.0, SensingKind::GlobalQfi);

    SUBCASE("no evolution, no information") {
        auto spec = ModelSpec::collective_no_zeeman(4, 1.0, 1.0);
        auto p = qfi_pure_fd(spec, SpaceKind::CollectiveSector, ProbeKind::RingZStretched,
                             0.0, 1.0, default_fd_step(1.0));
        CHECK(p.value == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(p.value >= 0.0);
        CHECK(p.method == QfiMethod::FdState);
    }

    SUBCASE("stretched probe at the period time hits the closed form") {
        auto spec = ModelSpec::collective_no_zeeman(10, 1.0, 1.0);
        auto p = qfi_pure_fd(spec, SpaceKind::CollectiveSector, ProbeKind::RingZStretched,
                             t0, 1.0, default_fd_step(1.0));
        CHECK(p.value == doctest::Approx(707.45324).epsilon(1e-4));
    }

    SUBCASE("product and collective bases agree") {
        auto spec = ModelSpec::zzxx(4, 1.0, 1.0);
        auto full = qfi_pure_fd(spec, SpaceKind::FullProduct, ProbeKind::RingZStretched,
                                2.3, 1.0, default_fd_step(1.0));
        auto coll = qfi_pure_fd(spec, SpaceKind::CollectiveSector, ProbeKind::RingZStretched,
                                2.3, 1.0, default_fd_step(1.0));
        CHECK(full.value == doctest::Approx(coll.value).epsilon(1e-8));
    }

    SUBCASE("agrees with the exact generator across models and random points") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> h_dist(0.3, 2.0);
        std::uniform_real_distribution<double> t_dist(0.2, 8.0);

        std::vector<ModelSpec> specs;
        for (int n : {2, 5}) {
            specs.push_back(ModelSpec::collective_no_zeeman(n, 1.0, 1.0));
            specs.push_back(ModelSpec::zzxx(n, 1.0, 1.0));
            specs.push_back(ModelSpec::xxz_collective(n, 1.0, 1.0, 0.5));
        }
        for (const auto& base : specs) {
            for (int trial = 0; trial < 5; ++trial) {
                const double h = h_dist(rng);
                const double t = t_dist(rng);
                auto spec = base.with_field(h);
                CAPTURE(spec.variant_name());
                CAPTURE(spec.n_ring);
                CAPTURE(h);
                CAPTURE(t);

                auto space = HilbertSpace::collective_sector(spec.n_ring);
                auto g = generator_exact(build_hamiltonian(spec, space),
                                         field_derivative(spec, space), t);
                const double exact =
                    qfi_from_generator(g, probe_state(space, ProbeKind::RingZStretched));
                auto fd = qfi_pure_fd(spec, SpaceKind::CollectiveSector,
                                      ProbeKind::RingZStretched, t, h, default_fd_step(h));
                CHECK(fd.value == doctest::Approx(exact).epsilon(1e-5));
            }
        }
    }

    SUBCASE("time grids match the single-point pipeline and are thread-stable") {
        auto spec = ModelSpec::zzxx(4, 1.0, 1.0);
        std::vector<double> times = {0.4, 1.2, 2.0, 3.6, 5.2};
        auto serial = qfi_trajectory_fd(spec, SpaceKind::CollectiveSector,
                                        ProbeKind::RingZStretched, times, 1.0,
                                        default_fd_step(1.0));
        REQUIRE(serial.size() == times.size());
        for (size_t i = 0; i < times.size(); ++i) {
            auto point = qfi_pure_fd(spec, SpaceKind::CollectiveSector, ProbeKind::RingZStretched,
                                     times[i], 1.0, default_fd_step(1.0));
            CHECK(serial[i] == doctest::Approx(point.value).epsilon(1e-8));
        }
        auto threaded = qfi_trajectory_fd(spec, SpaceKind::CollectiveSector,
                                          ProbeKind::RingZStretched, times, 1.0,
                                          default_fd_step(1.0), 1e-13, 4);
        for (size_t i = 0; i < times.size(); ++i) {
            CHECK(threaded[i] == doctest::Approx(serial[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("finite-difference step control") {
    CHECK(default_fd_step(0.5) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(default_fd_step(1.0) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(default_fd_step(10.0) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(default_fd_step(-10.0) == doctest::Approx(1e-3).epsilon(1e-14));

    // An oversized step makes the coarse and halved estimates disagree, which
    // must surface as a retry hint instead of a silently wrong number.
    auto spec = ModelSpec::collective_no_zeeman(2, 1.0, 1.0);
    const double t0 = sensing_time(1.0, 1.0, SensingKind::GlobalQfi);
    try {
        qfi_pure_fd(spec, SpaceKind::CollectiveSector, ProbeKind::RingZStretched, t0, 1.0, 0.5);
        FAIL("oversized finite-difference step should not converge");
    } catch (const FdStepError& e) {
        CHECK(e.suggested_step() == doctest::Approx(0.125).epsilon(1e-12));
    }
}

TEST_CASE("isotropic point and z-axis field: conserved generators") {
    SUBCASE("Delta = A grows as t^2 (N+1) with the stretched probe") {
        for (int n : {2, 4, 8}) {
            auto space = HilbertSpace::collective_sector(n);
            auto spec = ModelSpec::xxz_collective(n, 1.0, 1.0, 1.0);
            auto ham = build_hamiltonian(spec, space);
            auto h1 = field_derivative(spec, space);
            for (double t : {1.0, 5.0}) {
                auto g = generator_exact(ham, h1, t);
                CHECK(frob_distance(g, t * h1) < 1e-10);
                const double f = qfi_from_generator(g, probe_state(space, ProbeKind::RingZStretched));
                CHECK(f / (t * t) == doctest::Approx(n + 1.0).epsilon(1e-8));
            }
        }
    }

    SUBCASE("z-axis field commutes for every anisotropy and caps the QFI at the shot-noise form") {
        for (int n : {2, 6}) {
            auto space = HilbertSpace::collective_sector(n);
            auto spec = ModelSpec::xxz_collective(n, 1.0, 1.0, 0.8, FieldAxis::Z);
            auto ham = build_hamiltonian(spec, space);
            auto h1 = field_derivative(spec, space);
            const double t = 3.1;
            auto g = generator_exact(ham, h1, t);
            CHECK(frob_distance(g, t * h1) < 1e-10);

            // M_z-definite ring: only the central spin contributes, so the
            // QFI is t^2 independent of N (no ring enhancement at all).
            const double f_stretched =
                qfi_from_generator(g, probe_state(space, ProbeKind::RingZStretched));
            CHECK(f_stretched == doctest::Approx(t * t).epsilon(1e-10));

            const double f_x =
                qfi_from_generator(g, probe_state(space, ProbeKind::RingXPolarized));
            CHECK(f_x == doctest::Approx(t * t * (n + 1.0)).epsilon(1e-10));
        }
    }
}

TEST_CASE("single-qubit QFI from the Bloch vector") {
    CHECK(local_qubit_qfi(BlochVector::checked(1.0, 0.0, 0.0), {0.0, 0.0, 0.0}) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(local_qubit_qfi(BlochVector::checked(1.0, 0.0, 0.0), {0.0, 0.2, 0.0}) ==
          doctest::Approx(0.04).epsilon(1e-12));
    // Mixed branch: |dV|^2 + (V.dV)^2/(1-|V|^2).
    CHECK(local_qubit_qfi(BlochVector::checked(0.5, 0.0, 0.0), {0.1, 0.0, 0.0}) ==
          doctest::Approx(0.0133333333).epsilon(1e-6));
}

TEST_CASE("central-spin readout at the half period") {
    const double t0 = sensing_time(1.0, 1.0, SensingKind::LocalEpf);

    SUBCASE("closed-form expectations") {
        auto rest = sx_expectation_analytic(1.0, 0.0, 3);
        CHECK(rest.sx == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::abs(rest.sy) < 1e-14);

        auto one = sx_expectation_analytic(1.0, 1.0, 1);
        CHECK(one.sx == doctest::Approx(-0.3).epsilon(1e-12));
        CHECK(one.sy == doctest::Approx(0.4).epsilon(1e-12));

        auto two = sx_expectation_analytic(1.0, 1.0, 2);
        CHECK(two.sx == doctest::Approx(-0.14).epsilon(1e-12));
        CHECK(two.sy == doctest::Approx(-0.48).epsilon(1e-12));

        // The reduced state stays pure, the vector just precesses.
        for (int n : {1, 2, 5, 9}) {
            auto e = sx_expectation_analytic(1.0, 1.0, n);
            CHECK(e.sx * e.sx + e.sy * e.sy == doctest::Approx(0.25).epsilon(1e-12));
        }
    }

    SUBCASE("simulation agrees up to the half-period parity factor") {
        // exp(-i H t0) rotates each conditional ring spin by pi, which
        // contributes a (-1)^N the closed form deliberately drops (the local
        // QFI only sees |dV/dh|). The y component also picks up the mirrored
        // precession direction.
        for (int n : {1, 2, 3, 4}) {
            auto spec = ModelSpec::collective_no_zeeman(n, 1.0, 1.0);
            auto v = bloch_at(spec, SpaceKind::FullProduct, ProbeKind::RingXPolarized, t0, 1.0);
            auto closed = sx_expectation_analytic(1.0, 1.0, n);
            const double parity = (n % 2 == 0) ? 1.0 : -1.0;
            CHECK(v.x == doctest::Approx(parity * 2.0 * closed.sx).epsilon(1e-10));
            CHECK(v.y == doctest::Approx(-parity * 2.0 * closed.sy).epsilon(1e-10));
            CHECK(std::abs(v.z) < 1e-10);
        }
    }

    SUBCASE("stretched-probe coherence trajectory matches the per-site product form") {
        auto spec = ModelSpec::collective_no_zeeman(3, 1.0, 1.0);
        for (double t : {0.3, 1.1, 2.7, 4.9}) {
            auto v = bloch_at(spec, SpaceKind::FullProduct, ProbeKind::RingZStretched, t, 1.0);
            CHECK(0.5 * v.x == doctest::Approx(sx_trajectory_analytic(1.0, 1.0, 3, t)).epsilon(1e-10));
        }
        CHECK(sx_trajectory_analytic(1.0, 1.0, 3, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
        // Full revival after one precession period.
        CHECK(sx_trajectory_analytic(1.0, 1.0, 6, 2.0 * t0) == doctest::Approx(0.5).epsilon(1e-12));
        // At the half period the coherence shrinks to ((h^2 - A^2/4)/Omega^2)^N.
        CHECK(sx_trajectory_analytic(1.0, 1.0, 1, t0) == doctest::Approx(0.3).epsilon(1e-12));
    }
}

TEST_CASE("closed-form QFI formulas") {
    SUBCASE("local scheme") {
        CHECK(local_qfi_analytic(1.0, 1.0, 10) == doctest::Approx(64.0).epsilon(1e-12));
        CHECK(local_qfi_analytic(1.0, 1.0, 8) == doctest::Approx(40.96).epsilon(1e-12));
        CHECK(local_qfi_analytic(2.0, 1.0, 5) == doctest::Approx(25.0).epsilon(1e-12));
        CHECK(local_qfi_analytic(1.0, 1e6, 4) < 1e-10);
    }

    SUBCASE("global scheme at the period time") {
        CHECK(qfi_analytic_t0(1.0, 1.0, 10) == doctest::Approx(707.45324).epsilon(1e-7));
        CHECK(qfi_analytic_t0(1.0, 1.0, 40) == doctest::Approx(8893.6979).epsilon(1e-7));
        CHECK(qfi_analytic_t0(1.0, 1.0, 12) == doctest::Approx(970.221591).epsilon(1e-7));
        CHECK(qfi_analytic_t0(1.0, 0.0, 10) == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("general-time form reduces to the period form and to the generator variance") {
        for (double a : {0.8, 1.0}) {
            for (double h : {0.5, 1.0}) {
                for (int n : {4, 10}) {
                    const double t0 = sensing_time(a, h, SensingKind::GlobalQfi);
                    CHECK(qfi_analytic_t(a, h, n, t0) ==
                          doctest::Approx(qfi_analytic_t0(a, h, n)).epsilon(1e-12));
                    CHECK(qfi_analytic_t(a, h, n, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
                }
            }
        }

        auto space = HilbertSpace::collective_sector(10);
        auto spec = ModelSpec::collective_no_zeeman(10, 1.0, 1.0);
        auto g = generator_exact(build_hamiltonian(spec, space), field_derivative(spec, space), 1.7);
        CHECK(qfi_analytic_t(1.0, 1.0, 10, 1.7) ==
              doctest::Approx(qfi_from_generator(g, probe_state(space, ProbeKind::RingZStretched)))
                  .epsilon(1e-8));
    }
}

TEST_CASE("error propagation: moments, slope and the sigma_x pipeline") {
    CHECK(error_propagation(0.0, 0.25, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(error_propagation(0.3, 0.25, 2.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::isinf(error_propagation(0.0, 0.25, 0.0)));
    CHECK(error_propagation(0.5, 0.25 - 1e-14, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(error_propagation(1.0, 0.5, 1.0), DomainError);

    // At the half period the x readout saturates the local bound:
    // delta h = (A^2 + 4h^2)/(4NA), squared 25/1600 at N=10, A=h=1.
    auto spec = ModelSpec::collective_no_zeeman(10, 1.0, 1.0);
    const double t0 = sensing_time(1.0, 1.0, SensingKind::LocalEpf);
    auto epf = epf_sigma_x_fd(spec, SpaceKind::CollectiveSector, ProbeKind::RingXPolarized,
                              t0, 1.0, default_fd_step(1.0));
    CHECK(epf.value * epf.value == doctest::Approx(0.015625).epsilon(1e-6));
    CHECK(epf.method == QfiMethod::Epf);
    CHECK(1.0 / (epf.value * epf.value) ==
          doctest::Approx(local_qfi_analytic(1.0, 1.0, 10)).epsilon(1e-6));
}

TEST_CASE("local Bloch pipeline reproduces the closed form") {
    const double t0 = sensing_time(1.0, 1.0, SensingKind::LocalEpf);
    auto spec = ModelSpec::collective_no_zeeman(4, 1.0, 1.0);
    auto p = local_qfi_fd(spec, SpaceKind::FullProduct, ProbeKind::RingXPolarized,
                          t0, 1.0, default_fd_step(1.0));
    CHECK(p.value == doctest::Approx(10.24).epsilon(1e-5));
    CHECK(p.method == QfiMethod::LocalBloch);

    // Off the reference field: 16 A^2 N^2 / (A^2 + 4h^2)^2 at h = 0.5 gives 4 N^2.
    const double t_half = sensing_time(1.0, 0.5, SensingKind::LocalEpf);
    auto weaker = local_qfi_fd(spec.with_field(0.5), SpaceKind::FullProduct,
                               ProbeKind::RingXPolarized, t_half, 0.5, default_fd_step(0.5));
    CHECK(weaker.value == doctest::Approx(local_qfi_analytic(1.0, 0.5, 4)).epsilon(1e-5));
    CHECK(local_qfi_analytic(1.0, 0.5, 4) == doctest::Approx(64.0).epsilon(1e-12));
}

TEST_CASE("maximal QFI and the optimal probe") {
    SUBCASE("a single-term generator pins the stretched superposition") {
        GeneratorCoeffs c;
        c.beta = 2.0;
        auto opt = fmax_and_optimal_probe(c, 4);
        CHECK(opt.f_max == doctest::Approx(16.0).epsilon(1e-12));  // beta^2 I^2, I = 2
        CHECK(opt.theta == doctest::Approx(0.0).epsilon(1e-12));
        auto space = HilbertSpace::collective_sector(4);
        auto g = 2.0 * HermitianOperator(
                           space,
                           DenseMatrix(collective_op(space, Axis::Z, WhichSpins::Central).to_dense() *
                                       collective_op(space, Axis::Z, WhichSpins::Ring).to_dense()));
        CHECK(qfi_from_generator(g, opt.state) == doctest::Approx(16.0).epsilon(1e-10));
    }

    SUBCASE("full period at N = 10") {
        auto c = generator_coeffs_analytic(1.0, 1.0, sensing_time(1.0, 1.0, SensingKind::GlobalQfi));
        auto opt = fmax_and_optimal_probe(c, 10);
        CHECK(opt.f_max == doctest::Approx(2526.6187).epsilon(1e-6));
        // 4 alpha^2 + beta^2 with gamma = 0, I = 5.
        CHECK(opt.f_max ==
              doctest::Approx((4.0 * c.alpha * c.alpha + c.beta * c.beta) * 25.0).epsilon(1e-12));
        CHECK(opt.theta == doctest::Approx(std::atan(2.0)).epsilon(1e-9));
    }

    SUBCASE("the probe saturates the bound end to end") {
        for (int n : {2, 4}) {
            for (double t : {1.3, sensing_time(1.0, 1.0, SensingKind::GlobalQfi)}) {
                CAPTURE(n);
                CAPTURE(t);
                auto space = HilbertSpace::collective_sector(n);
                auto spec = ModelSpec::collective_no_zeeman(n, 1.0, 1.0);
                auto g = generator_exact(build_hamiltonian(spec, space),
                                         field_derivative(spec, space), t);
                auto opt = fmax_and_optimal_probe(generator_coeffs_analytic(1.0, 1.0, t), n);
                CHECK(opt.state.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(qfi_from_generator(g, opt.state) == doctest::Approx(opt.f_max).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("estimation bounds are ordered at the half period") {
    // Inverse-squared readout error <= local QFI <= global QFI <= maximal QFI.
    const double t0 = sensing_time(1.0, 1.0, SensingKind::LocalEpf);
    for (int n : {2, 4, 6}) {
        CAPTURE(n);
        auto spec = ModelSpec::collective_no_zeeman(n, 1.0, 1.0);
        const double step = default_fd_step(1.0);

        auto epf = epf_sigma_x_fd(spec, SpaceKind::FullProduct, ProbeKind::RingXPolarized,
                                  t0, 1.0, step);
        const double inv_sq = 1.0 / (epf.value * epf.value);
        auto local = local_qfi_fd(spec, SpaceKind::FullProduct, ProbeKind::RingXPolarized,
                                  t0, 1.0, step);
        auto global = qfi_pure_fd(spec, SpaceKind::FullProduct, ProbeKind::RingXPolarized,
                                  t0, 1.0, step);
        auto fmax = fmax_and_optimal_probe(generator_coeffs_analytic(1.0, 1.0, t0), n).f_max;

        const double slack = 1e-6;
        CHECK(inv_sq <= local.value + slack);
        CHECK(local.value <= global.value + slack);
        CHECK(global.value <= fmax + slack);

        // The x readout saturates the local bound here, so the first link is tight.
        CHECK(inv_sq == doctest::Approx(local.value).epsilon(1e-5));
    }
}
