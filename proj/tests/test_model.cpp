#include <doctest.h>

#include <Eigen/Dense>
#include <bit>
#include <numeric>
#include <random>

#include "test_states.hpp"
#include "xxz/eigensolver.hpp"
#include "xxz/model.hpp"

using namespace xxz;

namespace {

LadderSpec make_spec(int n_rungs, double j_leg, double j_rung, double delta) {
    LadderSpec spec;
    spec.n_rungs = n_rungs;
    spec.j_leg = j_leg;
    spec.j_rung = j_rung;
    spec.delta = delta;
    return spec;
}

// Project a full-space dense Hamiltonian onto the sector basis.
Eigen::MatrixXd project_to_sector(const Eigen::MatrixXd& h, const SectorBasis& basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = h(basis.state(static_cast<std::size_t>(i)),
                          basis.state(static_cast<std::size_t>(j)));
        }
    }
    return out;
}

Eigen::MatrixXd to_dense(const SparseSymmetricMatrix& m) {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.dim),
                                                  static_cast<Eigen::Index>(m.dim));
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t k = m.row_start[i]; k < m.row_start[i + 1]; ++k) {
            dense(static_cast<Eigen::Index>(i), m.col[k]) = m.val[k];
        }
    }
    return dense;
}

}  // namespace

TEST_CASE("site_index linearizes (rung, leg) labels") {
    const LadderSpec spec = make_spec(8, 1, 1, 1);
    CHECK(site_index(spec, 0, 0) == 0);
    CHECK(site_index(spec, 0, 1) == 1);
    CHECK(site_index(spec, 4, 1) == 9);
    CHECK(site_index(spec, 7, 0) == 14);
    CHECK_THROWS_AS(site_index(spec, 8, 0), std::invalid_argument);
    CHECK_THROWS_AS(site_index(spec, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(site_index(spec, 0, 2), std::invalid_argument);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(make_spec(2, 1, 1, 1).validate(), std::invalid_argument);
    CHECK_NOTHROW(make_spec(3, 1, 1, 1).validate());
    LadderSpec bad = make_spec(4, 1, 1, 1);
    bad.delta = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sector basis enumeration") {
    const SectorBasis b2 = enumerate_sector_basis(2, 0);
    REQUIRE(b2.size() == 2);
    CHECK(b2.state(0) == 0b01);
    CHECK(b2.state(1) == 0b10);

    CHECK(enumerate_sector_basis(4, 0).size() == 6);
    CHECK(enumerate_sector_basis(16, 0).size() == 12870);

    const SectorBasis b6 = enumerate_sector_basis(6, 0);
    CHECK(b6.size() == 20);
    for (std::size_t r = 0; r < b6.size(); ++r) {
        CHECK(std::popcount(b6.state(r)) == 3);
        if (r > 0) CHECK(b6.state(r) > b6.state(r - 1));  // strictly increasing
        CHECK(b6.rank_of(b6.state(r)) == static_cast<std::int64_t>(r));
    }
    CHECK(b6.rank_of(0b111000u) == static_cast<std::int64_t>(b6.size()) - 1);
    CHECK(b6.rank_of(0b110000u) == -1);  // wrong popcount

    // nonzero magnetization and parity rejection
    CHECK(enumerate_sector_basis(4, 2).size() == 4);
    CHECK(enumerate_sector_basis(4, -4).size() == 1);
    CHECK_THROWS_AS(enumerate_sector_basis(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_sector_basis(4, 6), std::invalid_argument);
}

TEST_CASE("single rung block has the analytic spectrum") {
    // Two sites coupled by J_r (xx + yy + delta zz): eigenvalues
    // {-J_r(2+delta), J_r(2-delta), J_r delta, J_r delta}.
    const double jr = 1.7, delta = 0.4;
    const Eigen::MatrixXd h = testutil::pauli_bond(2, 0, 1, jr, delta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    std::vector<double> expect = {-jr * (2 + delta), jr * delta, jr * delta, jr * (2 - delta)};
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 4; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("hamiltonian matches the dense kronecker oracle at N = 6") {
    const LadderSpec spec = make_spec(3, 1, 1, 1);
    const SectorBasis basis = enumerate_sector_basis(6, 0);
    const SparseSymmetricMatrix h = build_hamiltonian(spec, basis);
    REQUIRE(h.dim == 20);

    const Eigen::MatrixXd full = testutil::dense_ladder_hamiltonian(3, 1, 1, 1);
    const Eigen::MatrixXd projected = project_to_sector(full, basis);
    CHECK((to_dense(h) - projected).cwiseAbs().maxCoeff() < 1e-14);

    // Ground energy through the sector matrix equals the full-space minimum
    // restricted to the sector.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projected);
    const DenseSpectrum spec_h = dense_eigensolve_oracle(h);
    CHECK(spec_h.eigenvalues(0) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));

    // Row sums of off-diagonal magnitudes stay below 2 * n_bonds * 2.
    const double bound = 4.0 * static_cast<double>(ladder_bonds(spec).size());
    for (std::size_t i = 0; i < h.dim; ++i) {
        double sum = 0;
        for (std::size_t k = h.row_start[i]; k < h.row_start[i + 1]; ++k) {
            if (h.col[k] != i) sum += std::abs(h.val[k]);
        }
        CHECK(sum <= bound);
    }
}

TEST_CASE("j_rung = 0 decouples the legs") {
    const LadderSpec spec = make_spec(4, 1, 0, 0.7);
    const SectorBasis basis = enumerate_sector_basis(8, 0);
    const SparseSymmetricMatrix h = build_hamiltonian(spec, basis);
    for (std::size_t i = 0; i < h.dim; ++i) {
        for (std::size_t k = h.row_start[i]; k < h.row_start[i + 1]; ++k) {
            if (h.col[k] == i) continue;
            const std::uint32_t diff = basis.state(i) ^ basis.state(h.col[k]);
            const bool on_leg0 = (diff & 0xAAAAAAAAu) == 0;
            const bool on_leg1 = (diff & 0x55555555u) == 0;
            CHECK((on_leg0 || on_leg1));
        }
    }
}

TEST_CASE("hermiticity and sector closure for random couplings") {
    std::mt19937_64 gen(99);
    auto u = [&] { return static_cast<double>(gen() >> 11) * (4.0 / 9007199254740992.0) - 2.0; };
    for (int trial = 0; trial < 8; ++trial) {
        const LadderSpec spec = make_spec(3 + static_cast<int>(gen() % 2), 1.0, u(), u());
        const SectorBasis basis = enumerate_sector_basis(spec.n_sites(), 0);
        const SparseSymmetricMatrix h = build_hamiltonian(spec, basis);
        CHECK(h.is_symmetric(0.0));  // entries are constructed symmetrically, equality is exact
        for (std::size_t i = 0; i < h.dim; ++i) {
            for (std::size_t k = h.row_start[i]; k < h.row_start[i + 1]; ++k) {
                CHECK(std::popcount(basis.state(h.col[k])) == std::popcount(basis.state(i)));
            }
        }
    }
}

TEST_CASE("leg swap is an exact symmetry permutation") {
    const LadderSpec spec = make_spec(4, 1, 0.8, -0.6);
    const SectorBasis basis = enumerate_sector_basis(8, 0);
    const SparseSymmetricMatrix h = build_hamiltonian(spec, basis);

    auto swap_legs = [&](std::uint32_t m) {
        const std::uint32_t even = m & 0x55555555u;
        const std::uint32_t odd = m & 0xAAAAAAAAu;
        return (even << 1) | (odd >> 1);
    };
    // P H P^T == H entry for entry.
    for (std::size_t i = 0; i < h.dim; ++i) {
        const auto pi = static_cast<std::size_t>(basis.rank_of(swap_legs(basis.state(i))));
        REQUIRE(h.row_start[i + 1] - h.row_start[i] == h.row_start[pi + 1] - h.row_start[pi]);
        std::vector<std::pair<std::uint32_t, double>> mapped;
        for (std::size_t k = h.row_start[i]; k < h.row_start[i + 1]; ++k) {
            mapped.emplace_back(
                static_cast<std::uint32_t>(basis.rank_of(swap_legs(basis.state(h.col[k])))),
                h.val[k]);
        }
        std::sort(mapped.begin(), mapped.end());
        for (std::size_t k = h.row_start[pi], j = 0; k < h.row_start[pi + 1]; ++k, ++j) {
            CHECK(h.col[k] == mapped[j].first);
            CHECK(h.val[k] == mapped[j].second);
        }
    }
}

TEST_CASE("rung translation commutes with the hamiltonian (N = 6)") {
    const LadderSpec spec = make_spec(3, 1, 1.3, 0.5);
    const SectorBasis basis = enumerate_sector_basis(6, 0);
    const Eigen::MatrixXd h = to_dense(build_hamiltonian(spec, basis));

    auto translate = [&](std::uint32_t m) {
        // rotate rungs by one: site 2r+l -> 2(r+1 mod 3)+l
        std::uint32_t out = 0;
        for (int r = 0; r < 3; ++r) {
            for (int l = 0; l < 2; ++l) {
                if ((m >> (2 * r + l)) & 1u) out |= 1u << (2 * ((r + 1) % 3) + l);
            }
        }
        return out;
    };
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p(basis.rank_of(translate(basis.state(static_cast<std::size_t>(i)))), i) = 1.0;
    }
    CHECK((h * p - p * h).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("j_rung = 0 ground energy equals twice the single ring (N = 8)") {
    const LadderSpec spec = make_spec(4, 1, 0, 1.0);
    const SectorBasis basis = enumerate_sector_basis(8, 0);
    const DenseSpectrum ladder = dense_eigensolve_oracle(build_hamiltonian(spec, basis));

    const Eigen::MatrixXd ring = testutil::dense_ring_hamiltonian(4, 1.0, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ring);
    CHECK(ladder.eigenvalues(0) == doctest::Approx(2.0 * es.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("apply_hamiltonian") {
    const auto id = SparseSymmetricMatrix::identity(5);
    const std::vector<double> v = {1, -2, 3, 0.5, 0};
    CHECK(apply_hamiltonian(id, v) == v);

    const LadderSpec spec = make_spec(3, 1, 0.9, -1.2);
    const SectorBasis basis = enumerate_sector_basis(6, 0);
    const SparseSymmetricMatrix h = build_hamiltonian(spec, basis);
    const Eigen::MatrixXd dense = to_dense(h);

    std::mt19937_64 gen(5);
    std::vector<double> x(h.dim);
    for (double& xi : x) xi = static_cast<double>(gen() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
    const std::vector<double> y = apply_hamiltonian(h, x);
    const Eigen::Map<const Eigen::VectorXd> xe(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd ye = dense * xe;
    for (std::size_t i = 0; i < h.dim; ++i) {
        CHECK(std::abs(y[i] - ye(static_cast<Eigen::Index>(i))) < 1e-12);
    }

    const std::vector<double> zero(h.dim, 0.0);
    CHECK(apply_hamiltonian(h, zero) == zero);

    std::vector<double> wrong(h.dim + 1, 0.0);
    CHECK_THROWS_AS(apply_hamiltonian(h, wrong), std::invalid_argument);
}

TEST_CASE("basis mismatch is rejected") {
    const LadderSpec spec = make_spec(4, 1, 1, 1);
    const SectorBasis basis = enumerate_sector_basis(6, 0);
    CHECK_THROWS_AS(build_hamiltonian(spec, basis), std::invalid_argument);
}
