#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specgap/complex.hpp"
#include "specgap/whitney.hpp"

using namespace specgap;

namespace {

Vec random_character(int g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 2.0 * 3.14159265358979);
    Vec k(g);
    for (int a = 0; a < g; ++a) k[a] = dist(rng);
    return k;
}

double dd_product_norm(const PeriodicComplex& K, const Vec& k) {
    double worst = 0;
    for (int j = 0; j + 2 <= K.rank; ++j) {
        CMat d0 = K.coboundary_matrix(j, k);
        CMat d1 = K.coboundary_matrix(j + 1, k);
        CMat prod = d1 * d0;
        worst = std::max(worst, prod.cwiseAbs().maxCoeff());
    }
    return worst;
}

// Re-choose the fundamental-domain representative of each vertex orbit:
// vertex v moves to x(v) + B s(v) and every reference (v, off) becomes
// (v, off - s(v)). The cover complex is unchanged.
PeriodicComplex translate_representatives(const PeriodicComplex& K,
                                          const std::function<Offset(int)>& shift) {
    PeriodicComplex L = K;
    const int g = K.rank;
    for (int idx = 0; idx < static_cast<int>(K.vertex_positions.size()); ++idx) {
        const Offset s = shift(idx);
        for (int a = 0; a < g; ++a)
            L.vertex_positions[idx] += static_cast<double>(s[a]) * K.lattice_basis.col(a);
    }
    auto adjust = [&](Cell& cell) {
        for (auto& v : cell.verts) {
            const Offset s = shift(v.index);
            for (int a = 0; a < g; ++a) v.offset[a] -= s[a];
        }
        canonicalize_cell(cell);
    };
    for (int j = 0; j <= g; ++j) {
        L.cell_ids[j].clear();
        for (std::size_t c = 0; c < K.cells[j].size(); ++c) {
            adjust(L.cells[j][c]);
            L.cell_ids[j][L.cells[j][c]] = static_cast<int>(c);
        }
    }
    for (auto& top : L.top_simplices_raw)
        for (auto& v : top.verts) {
            const Offset s = shift(v.index);
            for (int a = 0; a < g; ++a) v.offset[a] -= s[a];
        }
    return L;
}

}  // namespace

TEST_CASE("circle with two cells: counts and Euler characteristic") {
    auto K = build_torus_complex(1, 2, Mat::Identity(1, 1));
    CHECK(K.cell_count(0) == 2);
    CHECK(K.cell_count(1) == 2);
    CHECK(K.euler_characteristic() == 0);
}

TEST_CASE("unit square torus: 1 vertex, 3 edges, 2 triangles") {
    auto K = build_torus_complex(2, 1, Mat::Identity(2, 2));
    CHECK(K.cell_count(0) == 1);
    CHECK(K.cell_count(1) == 3);
    CHECK(K.cell_count(2) == 2);
    CHECK(K.euler_characteristic() == 0);
}

TEST_CASE("g=3 torus: Kuhn counts and vanishing Euler characteristic") {
    auto K = build_torus_complex(3, 1, Mat::Identity(3, 3));
    CHECK(K.cell_count(0) == 1);
    CHECK(K.cell_count(3) == 6);
    CHECK(K.euler_characteristic() == 0);
}

TEST_CASE("twisted d0 at the trivial character annihilates constants") {
    auto K = build_torus_complex(1, 4, Mat::Identity(1, 1));
    CMat d = K.coboundary_matrix(0, Vec::Zero(1));
    CVec ones = CVec::Ones(4);
    CHECK((d * ones).norm() == doctest::Approx(0.0).epsilon(1e-14));
    Eigen::JacobiSVD<CMat> svd(d);
    int null_dim = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] < 1e-12) ++null_dim;
    CHECK(null_dim == 1);
}

TEST_CASE("coboundary composition vanishes at random characters") {
    std::mt19937_64 rng(7);
    for (int g : {2, 3}) {
        auto K = build_torus_complex(g, 2, Mat::Identity(g, g));
        for (int trial = 0; trial < 16; ++trial) {
            CHECK(dd_product_norm(K, random_character(g, rng)) <= 1e-12);
        }
    }
}

TEST_CASE("subdivision halves the mesh and preserves counts scaling") {
    auto K = build_torus_complex(1, 2, Mat::Identity(1, 1));
    auto K2 = subdivide(K);
    CHECK(K2.cell_count(0) == 4);
    CHECK(mesh_stats(K2).mesh == doctest::Approx(0.5 * mesh_stats(K).mesh).epsilon(1e-14));

    auto T = build_torus_complex(2, 2, Mat::Identity(2, 2));
    auto T2 = subdivide(T);
    CHECK(T2.cell_count(0) == 4 * T.cell_count(0));
    CHECK(mesh_stats(T2).mesh == doctest::Approx(0.5 * mesh_stats(T).mesh).epsilon(1e-14));
}

TEST_CASE("fullness is constant across self-similar refinements") {
    auto K = build_torus_complex(2, 1, Mat::Identity(2, 2));
    const double f0 = mesh_stats(K).fullness_min;
    CHECK(f0 == doctest::Approx(0.25).epsilon(1e-13));  // (h^2/2)/(h sqrt 2)^2
    auto K1 = subdivide(K);
    auto K2 = subdivide(K1);
    CHECK(mesh_stats(K1).fullness_min == doctest::Approx(f0).epsilon(1e-12));
    CHECK(mesh_stats(K2).fullness_min == doctest::Approx(f0).epsilon(1e-12));
    CHECK(mesh_stats(K2).fullness_min >= f0 * (1.0 - 1e-12));
}

TEST_CASE("subdivided complex keeps d(k) d(k) = 0 at random characters") {
    std::mt19937_64 rng(13);
    auto K = subdivide(build_torus_complex(2, 1, Mat::Identity(2, 2)));
    for (int trial = 0; trial < 16; ++trial)
        CHECK(dd_product_norm(K, random_character(2, rng)) <= 1e-12);
}

TEST_CASE("mesh statistics on reference grids") {
    CHECK(mesh_stats(build_torus_complex(1, 4, Mat::Identity(1, 1))).mesh ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(mesh_stats(build_torus_complex(2, 1, Mat::Identity(2, 2))).mesh ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("refinement scaling law: vertices x 2^{gL}, mesh / 2^L") {
    auto K = build_torus_complex(2, 1, Mat::Identity(2, 2));
    auto K2 = subdivide(subdivide(K));
    CHECK(K2.cell_count(0) == K.cell_count(0) * 16);
    CHECK(mesh_stats(K2).mesh == doctest::Approx(mesh_stats(K).mesh / 4).epsilon(1e-14));
}

TEST_CASE("invalid construction inputs are rejected") {
    CHECK_THROWS(build_torus_complex(4, 1, Mat::Identity(4, 4)));
    CHECK_THROWS(build_torus_complex(0, 1, Mat::Identity(1, 1)));
    CHECK_THROWS(build_torus_complex(1, 0, Mat::Identity(1, 1)));
    Mat degenerate = Mat::Zero(2, 2);
    degenerate(0, 0) = 1.0;
    CHECK_THROWS(build_torus_complex(2, 2, degenerate));
}

TEST_CASE("cells store distinct vertex references with offset-normalized leads") {
    for (int g : {1, 2, 3}) {
        auto K = build_torus_complex(g, g == 3 ? 1 : 2, Mat::Identity(g, g));
        for (int j = 0; j <= g; ++j)
            for (const auto& c : K.cells[j]) {
                CHECK(c.verts.front().offset == Offset{});
                for (std::size_t a = 0; a < c.verts.size(); ++a)
                    for (std::size_t b = a + 1; b < c.verts.size(); ++b)
                        CHECK(!(c.verts[a] == c.verts[b]));
            }
    }
}

TEST_CASE("mass entries depend only on offset differences (translation equivariance)") {
    std::mt19937_64 rng(23);
    auto K = build_torus_complex(2, 2, Mat::Identity(2, 2));

    // uniform lattice shift: the assembled family is identical
    auto L = translate_representatives(K, [](int) { return Offset{1, 0, 0}; });
    for (int j = 0; j <= 2; ++j) {
        MassFamily MK = mass_family(K, j);
        MassFamily ML = mass_family(L, j);
        for (int trial = 0; trial < 4; ++trial) {
            Vec k = random_character(2, rng);
            CHECK((MK.evaluate(k) - ML.evaluate(k)).cwiseAbs().maxCoeff() <= 1e-13);
        }
    }

    // vertex-dependent representative choice: unitarily equivalent family
    auto M = translate_representatives(K, [](int idx) {
        return idx % 2 == 0 ? Offset{0, 1, 0} : Offset{};
    });
    for (int j = 0; j <= 2; ++j) {
        MassFamily MK = mass_family(K, j);
        MassFamily MM = mass_family(M, j);
        for (int trial = 0; trial < 4; ++trial) {
            Vec k = random_character(2, rng);
            Eigen::SelfAdjointEigenSolver<CMat> ea(MK.evaluate(k)), eb(MM.evaluate(k));
            CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}
