// Transform and norm checks: known coefficients, round trips, Plancherel
// against the quadrature L^2 norm, linearity, the symbol of the
// Laplace–Beltrami operator, and closed-form L^q values.

#include <catch2/catch_amalgamated.hpp>

#include <liewave/fourier.hpp>

using namespace liewave;

namespace {

std::shared_ptr<const Group> make_group(GroupKind kind, int n, double band) {
    GroupSpec spec;
    spec.kind = kind;
    spec.torus_dim = n;
    spec.band_limit = band;
    return Group::make(spec);
}

double max_coeff_diff(const SpectralField& A, const SpectralField& B) {
    double mx = 0.0;
    for (std::size_t m = 0; m < A.coeffs.size(); ++m)
        mx = std::max(mx, (A.coeffs[m] - B.coeffs[m]).cwiseAbs().maxCoeff());
    return mx;
}

GridField eval_on_grid(const std::shared_ptr<const Group>& g,
                       const std::function<cplx(const std::vector<double>&)>& f) {
    GridField out = GridField::zero(g);
    for (std::size_t i = 0; i < g->grid.size(); ++i)
        out.values(static_cast<Eigen::Index>(i)) = f(g->grid.points[i]);
    return out;
}

} // namespace

TEST_CASE("analyze of elementary fields") {
    SECTION("constant function hits only the trivial mode") {
        for (auto g : {make_group(GroupKind::Torus, 1, 4.0),
                       make_group(GroupKind::Torus, 3, 2.0),
                       make_group(GroupKind::SU2, 0, 6.0)}) {
            GridField one = GridField::zero(g);
            one.values.setConstant(cplx{2.5, 0.0});
            const SpectralField F = analyze(one);
            REQUIRE(std::abs(F.coeffs[0](0, 0) - cplx{2.5, 0.0}) <= 1e-12);
            for (std::size_t m = 1; m < F.coeffs.size(); ++m)
                REQUIRE(F.coeffs[m].cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    SECTION("cos x on the circle") {
        const auto g = make_group(GroupKind::Torus, 1, 4.0);
        const GridField f =
            eval_on_grid(g, [](const std::vector<double>& x) { return std::cos(x[0]); });
        const SpectralField F = analyze(f);
        for (std::size_t m = 0; m < F.coeffs.size(); ++m) {
            const int k = g->modes[m].index[0];
            const double expected = (k == 1 || k == -1) ? 0.5 : 0.0;
            REQUIRE(std::abs(F.coeffs[m](0, 0) - expected) <= 1e-12);
        }
    }
}

TEST_CASE("synthesize of elementary coefficients") {
    SECTION("trivial coefficient gives the constant field") {
        const auto g = make_group(GroupKind::SU2, 0, 6.0);
        SpectralField F = SpectralField::zero(g);
        F.coeffs[0](0, 0) = 1.0;
        const GridField f = synthesize(F);
        for (Eigen::Index i = 0; i < f.values.size(); ++i)
            REQUIRE(std::abs(f.values(i) - cplx{1.0, 0.0}) <= 1e-12);
    }
    SECTION("half coefficients at k = +-1 give cos x") {
        const auto g = make_group(GroupKind::Torus, 1, 4.0);
        SpectralField F = SpectralField::zero(g);
        F.coeffs[*g->find_mode({1})](0, 0) = 0.5;
        F.coeffs[*g->find_mode({-1})](0, 0) = 0.5;
        const GridField f = synthesize(F);
        for (std::size_t i = 0; i < g->grid.size(); ++i)
            REQUIRE(std::abs(f.values(static_cast<Eigen::Index>(i)) -
                             std::cos(g->grid.points[i][0])) <= 1e-12);
    }
    SECTION("missing mode matrix is rejected") {
        const auto g = make_group(GroupKind::Torus, 1, 4.0);
        SpectralField F = SpectralField::zero(g);
        F.coeffs.pop_back();
        REQUIRE_THROWS_AS(synthesize(F), std::invalid_argument);
    }
}

TEST_CASE("transform round trips on random band-limited fields") {
    for (auto g : {make_group(GroupKind::Torus, 1, 16.0),
                   make_group(GroupKind::Torus, 3, 4.0),
                   make_group(GroupKind::SU2, 0, 6.0)}) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const SpectralField F = random_spectral_field(g, 100 + s);
            const SpectralField back = analyze(synthesize(F));
            INFO("backend " << g->backend_name());
            REQUIRE(max_coeff_diff(F, back) <= 1e-10);
        }
    }
}

TEST_CASE("plancherel identity against the grid L2 norm") {
    for (auto g : {make_group(GroupKind::Torus, 1, 16.0),
                   make_group(GroupKind::Torus, 3, 4.0),
                   make_group(GroupKind::SU2, 0, 6.0)}) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const SpectralField F = random_spectral_field(g, 300 + s, 0.5);
            const double coeff_side = plancherel_norm(F);
            const double grid_side = lq_norm(synthesize(F), 2.0);
            INFO("backend " << g->backend_name());
            REQUIRE(std::abs(coeff_side - grid_side) <=
                    1e-10 * std::max(1.0, coeff_side));
        }
    }
    SECTION("constant field") {
        const auto g = make_group(GroupKind::Torus, 2, 2.0);
        SpectralField F = SpectralField::zero(g);
        F.coeffs[0](0, 0) = cplx{-3.0, 4.0};
        REQUIRE(plancherel_norm(F) == Catch::Approx(5.0).margin(1e-14));
    }
    SECTION("cos x has L2 norm sqrt(1/2)") {
        const auto g = make_group(GroupKind::Torus, 1, 4.0);
        const GridField f =
            eval_on_grid(g, [](const std::vector<double>& x) { return std::cos(x[0]); });
        REQUIRE(plancherel_norm(analyze(f)) ==
                Catch::Approx(std::sqrt(0.5)).margin(1e-12));
    }
}

TEST_CASE("transforms are linear") {
    const auto g = make_group(GroupKind::SU2, 0, 3.75);
    const SpectralField A = random_spectral_field(g, 1), B = random_spectral_field(g, 2);
    const cplx alpha{0.3, -1.1}, beta{-2.0, 0.7};
    GridField fa = synthesize(A), fb = synthesize(B);
    GridField combo = GridField::zero(g);
    combo.values = alpha * fa.values + beta * fb.values;
    SpectralField direct = analyze(combo);
    SpectralField expected = SpectralField::zero(g);
    for (std::size_t m = 0; m < expected.coeffs.size(); ++m)
        expected.coeffs[m] = alpha * A.coeffs[m] + beta * B.coeffs[m];
    REQUIRE(max_coeff_diff(direct, expected) <= 1e-12);
}

TEST_CASE("sobolev norms") {
    SECTION("constant field has zero homogeneous part") {
        const auto g = make_group(GroupKind::Torus, 2, 2.0);
        SpectralField F = SpectralField::zero(g);
        F.coeffs[0](0, 0) = 7.0;
        REQUIRE(sobolev_norm(F, 1.0).homogeneous == 0.0);
        REQUIRE(sobolev_norm(F, 2.5).full == Catch::Approx(7.0).margin(1e-14));
    }
    SECTION("cos x at s = 1") {
        const auto g = make_group(GroupKind::Torus, 1, 4.0);
        const GridField f =
            eval_on_grid(g, [](const std::vector<double>& x) { return std::cos(x[0]); });
        const auto n = sobolev_norm(analyze(f), 1.0);
        REQUIRE(n.homogeneous == Catch::Approx(std::sqrt(0.5)).margin(1e-12));
        REQUIRE(n.full == Catch::Approx(2.0 * std::sqrt(0.5)).margin(1e-12));
    }
    SECTION("homogeneous part equals plancherel norm of the symbol action") {
        const auto g = make_group(GroupKind::SU2, 0, 6.0);
        const SpectralField F = random_spectral_field(g, 9);
        SpectralField scaled = F;
        for (std::size_t m = 0; m < F.coeffs.size(); ++m)
            scaled.coeffs[m] *= std::sqrt(g->modes[m].eigenvalue);
        REQUIRE(sobolev_norm(F, 1.0).homogeneous ==
                Catch::Approx(plancherel_norm(scaled)).margin(1e-14));
    }
    SECTION("s must be positive") {
        const auto g = make_group(GroupKind::Torus, 1, 1.0);
        REQUIRE_THROWS_AS(sobolev_norm(SpectralField::zero(g), 0.0),
                          std::invalid_argument);
    }
}

TEST_CASE("lq norms") {
    const auto g = make_group(GroupKind::Torus, 1, 4.0);
    SECTION("constants") {
        GridField f = GridField::zero(g);
        f.values.setConstant(cplx{0.0, -2.0});
        for (double q : {1.0, 2.0, 3.5, 7.0})
            REQUIRE(lq_norm(f, q) == Catch::Approx(2.0).margin(1e-13));
        REQUIRE(sup_norm(f) == Catch::Approx(2.0).margin(1e-15));
    }
    SECTION("closed-form fourth moment of cos") {
        const GridField f =
            eval_on_grid(g, [](const std::vector<double>& x) { return std::cos(x[0]); });
        REQUIRE(lq_norm(f, 4.0) ==
                Catch::Approx(std::pow(3.0 / 8.0, 0.25)).margin(1e-12));
    }
    SECTION("q = 2 agrees with plancherel") {
        const SpectralField F = random_spectral_field(g, 17);
        REQUIRE(lq_norm(synthesize(F), 2.0) ==
                Catch::Approx(plancherel_norm(F)).margin(1e-10));
    }
    SECTION("q below one is rejected") {
        REQUIRE_THROWS_AS(lq_norm(GridField::zero(g), 0.5), std::invalid_argument);
    }
}

TEST_CASE("symbol of the laplacian") {
    SECTION("torus: hand-differentiated trigonometric polynomial") {
        const auto g = make_group(GroupKind::Torus, 1, 9.0);
        const GridField f = eval_on_grid(g, [](const std::vector<double>& x) {
            return std::cos(2.0 * x[0]) + 0.3 * std::sin(x[0]);
        });
        const GridField lap = eval_on_grid(g, [](const std::vector<double>& x) {
            return -4.0 * std::cos(2.0 * x[0]) - 0.3 * std::sin(x[0]);
        });
        const SpectralField F = analyze(f), L = analyze(lap);
        for (std::size_t m = 0; m < F.coeffs.size(); ++m)
            REQUIRE(std::abs(L.coeffs[m](0, 0) +
                             g->modes[m].eigenvalue * F.coeffs[m](0, 0)) <= 1e-12);
    }
    SECTION("su2: finite-difference casimir on the grid") {
        const auto g = make_group(GroupKind::SU2, 0, 3.75);
        // band-limited test function, evaluable off-grid through wigner_D
        auto fval = [](const Su2Element& el) {
            const Eigen::MatrixXcd D2 = wigner_D(2, el);
            return (D2(0, 1) + std::conj(D2(0, 1))) + 0.5 * D2(1, 1);
        };
        auto compose = [](const std::vector<double>& pt, int axis, double t) {
            Su2Element gen;
            const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
            if (axis == 0) gen.b = cplx{0.0, -s}, gen.a = c;
            else if (axis == 1) gen.b = -s, gen.a = c;
            else gen.a = std::polar(1.0, -0.5 * t);
            return Su2Element::from_euler({pt[0], pt[1], pt[2]}) * gen;
        };
        GridField f = GridField::zero(g), lap = GridField::zero(g);
        const double h = 1e-3;
        for (std::size_t i = 0; i < g->grid.size(); ++i) {
            const auto& pt = g->grid.points[i];
            f.values(static_cast<Eigen::Index>(i)) =
                fval(Su2Element::from_euler({pt[0], pt[1], pt[2]}));
            auto d2 = [&](double hh) {
                cplx acc = -6.0 * f.values(static_cast<Eigen::Index>(i));
                for (int axis = 0; axis < 3; ++axis) {
                    acc += fval(compose(pt, axis, hh));
                    acc += fval(compose(pt, axis, -hh));
                }
                return acc / (hh * hh);
            };
            lap.values(static_cast<Eigen::Index>(i)) =
                (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
        }
        const SpectralField F = analyze(f), L = analyze(lap);
        for (std::size_t m = 0; m < F.coeffs.size(); ++m)
            REQUIRE((L.coeffs[m] + g->modes[m].eigenvalue * F.coeffs[m])
                        .cwiseAbs()
                        .maxCoeff() <= 1e-6);
    }
}

TEST_CASE("reality symmetry of random real fields") {
    SECTION("torus: conjugate coefficients at opposite modes") {
        const auto g = make_group(GroupKind::Torus, 2, 4.0);
        const SpectralField F = random_real_field(g, 21);
        REQUIRE(reality_defect(F) <= 1e-12);
    }
    SECTION("su2: synthesis is real on the grid") {
        const auto g = make_group(GroupKind::SU2, 0, 6.0);
        const SpectralField F = random_real_field(g, 22);
        REQUIRE(reality_defect(F) <= 1e-12);
    }
}

TEST_CASE("grid-side round trip on band-limited fields") {
    for (auto g : {make_group(GroupKind::Torus, 2, 4.0),
                   make_group(GroupKind::SU2, 0, 6.0)}) {
        const GridField f = synthesize(random_spectral_field(g, 404));
        const GridField back = synthesize(analyze(f));
        INFO("backend " << g->backend_name());
        REQUIRE((back.values - f.values).cwiseAbs().maxCoeff() <= 1e-10);
    }
}
