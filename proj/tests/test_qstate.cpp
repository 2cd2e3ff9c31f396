#include <catch2/catch_amalgamated.hpp>

#include "mcb/qstate.hpp"
#include "test_support.hpp"

using namespace mcb;

TEST_CASE("dimension vector validation", "[qstate]") {
    REQUIRE_THROWS_AS(DimensionVector({2, 1, 2}), domain_error);
    REQUIRE_THROWS_AS(DimensionVector({}), shape_error);
    // 2^13 = 8192 exceeds the default cap of 4096.
    REQUIRE_THROWS_AS(DimensionVector(std::vector<int>(13, 2)), domain_error);
    REQUIRE(DimensionVector({2, 3, 4}).total_dim() == 24);
}

TEST_CASE("to_density basics", "[qstate]") {
    SECTION("bell projector") {
        const auto rho = to_density(test_support::bell_phi_plus());
        REQUIRE(rho.trace_real() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(rho.purity() == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("sub-normalized state keeps its squared norm as trace") {
        auto bell = test_support::bell_phi_plus();
        PureState scaled(bell.dims(), bell.amplitudes() / std::sqrt(2.0));
        REQUIRE(to_density(scaled).trace_real() == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("basis state") {
        ComplexVector amps = ComplexVector::Zero(8);
        amps(0) = 1.0;
        const auto rho = to_density(PureState(DimensionVector({2, 2, 2}), amps));
        REQUIRE(rho.matrix()(0, 0) == cxd(1.0));
        REQUIRE(rho.matrix().norm() == Catch::Approx(1.0));
    }
    SECTION("purity equals squared norm squared") {
        const auto phi = random_pure(DimensionVector({2, 3}), 5);
        PureState scaled(phi.dims(), phi.amplitudes() * 0.7);
        const double c = scaled.squared_norm();
        REQUIRE(to_density(scaled).purity() == Catch::Approx(c * c).margin(1e-10));
    }
}

TEST_CASE("partial trace on known states", "[qstate]") {
    SECTION("bell pair reduces to maximally mixed") {
        const auto rho = to_density(test_support::bell_phi_plus());
        const auto reduced = partial_trace(rho, {0});
        REQUIRE((reduced.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-12);
    }
    SECTION("product state factors") {
        const auto a = random_pure(DimensionVector({2}), 1);
        const auto b = random_pure(DimensionVector({3}), 2);
        ComplexVector amps(6);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) amps(i * 3 + j) = a.amplitude(i) * b.amplitude(j);
        const auto rho = to_density(PureState(DimensionVector({2, 3}), amps));
        const auto reduced = partial_trace(rho, {0});
        const ComplexMatrix expected = a.amplitudes() * a.amplitudes().adjoint();
        REQUIRE((reduced.matrix() - expected).norm() < 1e-12);
    }
    SECTION("qutrit GHZ reduces to diag(1/3,1/3,1/3)") {
        const auto rho = to_density(ghz(3, 3));
        const auto reduced = partial_trace(rho, {0});
        REQUIRE((reduced.matrix() - ComplexMatrix::Identity(3, 3) / 3.0).norm() < 1e-12);
    }
    SECTION("bad keep sets") {
        const auto rho = to_density(test_support::bell_phi_plus());
        REQUIRE_THROWS_AS(partial_trace(rho, {}), shape_error);
        REQUIRE_THROWS_AS(partial_trace(rho, {2}), shape_error);
        REQUIRE_THROWS_AS(partial_trace(rho, {0, 0}), shape_error);
    }
    SECTION("tracing parties one at a time composes") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto rho = random_density(DimensionVector({3, 2, 3}), seed);
            const auto two_step = partial_trace(partial_trace(rho, {0, 1}), {0});
            const auto direct = partial_trace(rho, {0});
            REQUIRE((two_step.matrix() - direct.matrix()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SECTION("trace preserved") {
        const auto rho = random_density(DimensionVector({2, 2, 3}), 9);
        REQUIRE(partial_trace(rho, {1, 2}).trace_real() ==
                Catch::Approx(rho.trace_real()).margin(1e-12));
    }
}

TEST_CASE("merge_parties regroups indices", "[qstate]") {
    SECTION("contiguous merge keeps the raw data") {
        const auto phi = random_pure(DimensionVector({2, 2, 3}), 3);
        const auto merged = merge_parties(phi, Partition(3, {{0}, {1, 2}}));
        REQUIRE(merged.dims().dims() == std::vector<int>{2, 6});
        REQUIRE((merged.amplitudes() - phi.amplitudes()).norm() == 0.0);

        const auto rho = to_density(phi);
        const auto merged_rho = merge_parties(rho, Partition(3, {{0}, {1, 2}}));
        REQUIRE((merged_rho.matrix() - rho.matrix()).norm() == 0.0);
    }
    SECTION("identity partition is a no-op") {
        const auto phi = random_pure(DimensionVector({2, 3, 2}), 4);
        const auto merged = merge_parties(phi, singleton_partition(3));
        REQUIRE(merged.dims() == phi.dims());
        REQUIRE((merged.amplitudes() - phi.amplitudes()).norm() == 0.0);
    }
    SECTION("permutation round-trips") {
        const auto phi = random_pure(DimensionVector({2, 3, 4}), 8);
        const auto shuffled = permute_parties(phi, {2, 0, 1});
        REQUIRE(shuffled.dims().dims() == std::vector<int>{4, 2, 3});
        const auto back = permute_parties(shuffled, {1, 2, 0});
        REQUIRE((back.amplitudes() - phi.amplitudes()).norm() == 0.0);
    }
    SECTION("interleaved merge matches elementwise index arithmetic") {
        const auto phi = random_pure(DimensionVector({2, 3, 2}), 12);
        const auto merged = merge_parties(phi, Partition(3, {{0, 2}, {1}}));
        REQUIRE(merged.dims().dims() == std::vector<int>{4, 3});
        // amplitude (i,j,k) lands at ((i,k), j)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 2; ++k)
                    REQUIRE(merged.amplitude((i * 2 + k) * 3 + j) ==
                            phi.amplitude(i * 6 + j * 2 + k));
    }
    SECTION("invalid partitions") {
        const auto phi = random_pure(DimensionVector({2, 2}), 1);
        REQUIRE_THROWS_AS(Partition(2, {{0}}), shape_error);
        REQUIRE_THROWS_AS(Partition(2, {{0}, {0, 1}}), shape_error);
        REQUIRE_THROWS_AS(merge_parties(phi, Partition(3, {{0}, {1}, {2}})), shape_error);
    }
}

TEST_CASE("qutrit GHZ mixture family", "[qstate]") {
    SECTION("x=1 is maximally mixed") {
        const auto rho = ggz_family(1.0);
        REQUIRE((rho.matrix() - ComplexMatrix::Identity(27, 27) / 27.0).norm() < 1e-14);
    }
    SECTION("x=0 is the pure projector") {
        const auto rho = ggz_family(0.0);
        REQUIRE(rho.purity() == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("diagonal entry at |000>") {
        const double x = 0.3;
        const auto rho = ggz_family(x);
        REQUIRE(rho.matrix()(0, 0).real() ==
                Catch::Approx(x / 27.0 + (1.0 - x) / 3.0).margin(1e-14));
    }
    SECTION("domain") {
        REQUIRE_THROWS_AS(ggz_family(-0.1), domain_error);
        REQUIRE_THROWS_AS(ggz_family(1.1), domain_error);
    }
}

TEST_CASE("2x2x2x3 example family", "[qstate]") {
    SECTION("x=1 is pure") {
        const auto rho = example2_family(1.0);
        REQUIRE(rho.purity() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(rho.trace_real() == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("x=0 default support is I/24") {
        const auto rho = example2_family(0.0);
        REQUIRE((rho.matrix() - ComplexMatrix::Identity(24, 24) / 24.0).norm() < 1e-14);
    }
    SECTION("embedded16 support leaves the 4th-party index 1 empty at x=0") {
        const auto rho = example2_family(0.0, Example2Support::embedded16);
        REQUIRE(rho.trace_real() == Catch::Approx(1.0).margin(1e-12));
        // index (0,0,0,1): stride of party 4 is 1, so global index 1
        REQUIRE(std::abs(rho.matrix()(1, 1)) == 0.0);
        REQUIRE(rho.matrix()(0, 0).real() == Catch::Approx(1.0 / 16.0).margin(1e-14));
        REQUIRE(rho.matrix()(2, 2).real() == Catch::Approx(1.0 / 16.0).margin(1e-14));
    }
    SECTION("both supports stay states across the grid") {
        for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            for (auto support : {Example2Support::full24, Example2Support::embedded16}) {
                const auto rho = example2_family(x, support);
                REQUIRE(rho.trace_real() == Catch::Approx(1.0).margin(1e-10));
                REQUIRE_NOTHROW(assert_psd(rho.matrix()));
            }
            const auto g = ggz_family(x);
            REQUIRE(g.trace_real() == Catch::Approx(1.0).margin(1e-10));
            REQUIRE_NOTHROW(assert_psd(g.matrix()));
        }
    }
}

TEST_CASE("generators are deterministic and well formed", "[qstate]") {
    const DimensionVector dims({2, 3, 2});
    SECTION("random_pure repeats per seed") {
        const auto a = random_pure(dims, 123);
        const auto b = random_pure(dims, 123);
        REQUIRE((a.amplitudes() - b.amplitudes()).norm() == 0.0);
        const auto c = random_pure(dims, 124);
        REQUIRE((a.amplitudes() - c.amplitudes()).norm() > 1e-3);
        REQUIRE(a.is_normalized());
    }
    SECTION("random_density is a state") {
        const auto rho = random_density(dims, 55);
        REQUIRE(rho.trace_real() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE_NOTHROW(assert_psd(rho.matrix()));
        const auto again = random_density(dims, 55);
        REQUIRE((rho.matrix() - again.matrix()).norm() == 0.0);
    }
    SECTION("random_density rank control") {
        const auto rho = random_density(DimensionVector({3, 3}), 4, 2);
        const Spectrum spec = hermitian_spectrum(rho.matrix());
        int rank = 0;
        for (double lam : spec.eigenvalues)
            if (lam > 1e-10) ++rank;
        REQUIRE(rank == 2);
    }
    SECTION("ghz and w amplitudes") {
        const auto g = ghz(3, 2);
        REQUIRE(g.amplitude(0).real() == Catch::Approx(1.0 / std::sqrt(2.0)));
        REQUIRE(g.amplitude(7).real() == Catch::Approx(1.0 / std::sqrt(2.0)));
        REQUIRE(g.squared_norm() == Catch::Approx(1.0).margin(1e-12));

        const auto w = w_state(3);
        REQUIRE(w.amplitude(1).real() == Catch::Approx(1.0 / std::sqrt(3.0)));
        REQUIRE(w.amplitude(2).real() == Catch::Approx(1.0 / std::sqrt(3.0)));
        REQUIRE(w.amplitude(4).real() == Catch::Approx(1.0 / std::sqrt(3.0)));
        REQUIRE(w.squared_norm() == Catch::Approx(1.0).margin(1e-12));
    }
}
