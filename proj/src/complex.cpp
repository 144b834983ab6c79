#include "specgap/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace specgap {

int canonicalize_cell(Cell& cell) {
    auto& v = cell.verts;
    int sign = 1;
    // insertion sort, tracking parity
    for (std::size_t i = 1; i < v.size(); ++i) {
        for (std::size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
            std::swap(v[j], v[j - 1]);
            sign = -sign;
        }
    }
    const Offset base = v.front().offset;
    for (auto& r : v)
        for (int a = 0; a < kMaxRank; ++a) r.offset[a] -= base[a];
    return sign;
}

Vec PeriodicComplex::position(const VertexRef& v) const {
    Vec p = vertex_positions.at(v.index);
    for (int a = 0; a < rank; ++a)
        if (v.offset[a] != 0) p += static_cast<double>(v.offset[a]) * lattice_basis.col(a);
    return p;
}

std::pair<int, Offset> PeriodicComplex::locate(int degree, const Cell& simplex) const {
    Cell c = simplex;
    canonicalize_cell(c);
    const Offset shift = simplex.verts.empty()
                             ? Offset{}
                             : std::min_element(simplex.verts.begin(), simplex.verts.end())->offset;
    auto it = cell_ids[degree].find(c);
    if (it == cell_ids[degree].end()) return {-1, shift};
    return {it->second, shift};
}

CMat PeriodicComplex::coboundary_matrix(int degree, const Vec& k) const {
    if (degree < 0 || degree >= rank)
        throw std::invalid_argument("coboundary degree out of range");
    CMat d = CMat::Zero(cell_count(degree + 1), cell_count(degree));
    for (const auto& e : coboundary.at(degree)) {
        double phase = 0.0;
        for (int a = 0; a < rank; ++a) phase += k[a] * e.offset[a];
        d(e.coface, e.face) += static_cast<double>(e.sign) * std::polar(1.0, phase);
    }
    return d;
}

long PeriodicComplex::euler_characteristic() const {
    long chi = 0;
    for (int j = 0; j <= rank; ++j) chi += (j % 2 == 0 ? 1 : -1) * cell_count(j);
    return chi;
}

namespace {

// All (j+1)-element subsequences of 0..g, as index lists.
std::vector<std::vector<int>> subsets(int g_plus_1, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        int i = size - 1;
        while (i >= 0 && idx[i] == g_plus_1 - size + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace

PeriodicComplex build_torus_complex(int g, int n_per_axis, const Mat& lattice_basis) {
    if (g < 1 || g > kMaxRank) throw std::invalid_argument("rank g must be in {1,2,3}");
    if (n_per_axis < 1) throw std::invalid_argument("n_per_axis must be >= 1");
    if (lattice_basis.rows() != g || lattice_basis.cols() != g)
        throw std::invalid_argument("lattice_basis must be g x g");
    if (std::abs(lattice_basis.determinant()) < 1e-14)
        throw std::invalid_argument("degenerate lattice basis");

    const int N = n_per_axis;
    PeriodicComplex K;
    K.rank = g;
    K.n_per_axis = N;
    K.lattice_basis = lattice_basis;

    auto vertex_index = [&](const std::array<int, kMaxRank>& grid) {
        int idx = 0;
        for (int a = 0; a < g; ++a) idx = idx * N + grid[a];
        return idx;
    };

    // fundamental-domain vertices at grid points / N
    {
        std::array<int, kMaxRank> v{};
        const int total = static_cast<int>(std::pow(N, g) + 0.5);
        K.vertex_positions.resize(total);
        for (int lin = 0; lin < total; ++lin) {
            int rem = lin;
            for (int a = g - 1; a >= 0; --a) {
                v[a] = rem % N;
                rem /= N;
            }
            Vec pos = Vec::Zero(g);
            for (int a = 0; a < g; ++a) pos += (static_cast<double>(v[a]) / N) * lattice_basis.col(a);
            K.vertex_positions[vertex_index(v)] = pos;
        }
    }

    // reduce unreduced grid coords (components in [0, N]) to a vertex ref
    auto make_ref = [&](const std::array<int, kMaxRank>& u) {
        VertexRef r;
        std::array<int, kMaxRank> grid{};
        for (int a = 0; a < g; ++a) {
            int q = u[a] >= 0 ? u[a] / N : -((-u[a] + N - 1) / N);
            grid[a] = u[a] - q * N;
            r.offset[a] = q;
        }
        r.index = vertex_index(grid);
        return r;
    };

    // Kuhn tops: one per (grid cube, permutation of axes)
    std::vector<int> perm(g);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const int cubes = static_cast<int>(std::pow(N, g) + 0.5);
    for (int lin = 0; lin < cubes; ++lin) {
        std::array<int, kMaxRank> c{};
        int rem = lin;
        for (int a = g - 1; a >= 0; --a) {
            c[a] = rem % N;
            rem /= N;
        }
        for (const auto& p : perms) {
            Cell top;
            std::array<int, kMaxRank> u = c;
            top.verts.push_back(make_ref(u));
            for (int r = 0; r < g; ++r) {
                ++u[p[r]];
                top.verts.push_back(make_ref(u));
            }
            K.top_simplices_raw.push_back(top);
        }
    }

    // deduplicate faces per degree
    K.cells.assign(g + 1, {});
    for (int j = 0; j <= g; ++j) {
        const auto subs = subsets(g + 1, j + 1);
        for (const auto& top : K.top_simplices_raw) {
            for (const auto& s : subs) {
                Cell f;
                f.verts.reserve(j + 1);
                for (int i : s) f.verts.push_back(top.verts[i]);
                canonicalize_cell(f);
                auto [it, inserted] = K.cell_ids[j].try_emplace(f, K.cell_count(j));
                if (inserted) K.cells[j].push_back(f);
            }
        }
    }

    // signed coboundary incidence
    K.coboundary.assign(g, {});
    for (int j = 0; j + 1 <= g; ++j) {
        for (int cid = 0; cid < K.cell_count(j + 1); ++cid) {
            const Cell& tau = K.cells[j + 1][cid];
            for (int i = 0; i <= j + 1; ++i) {
                Cell f;
                for (int r = 0; r <= j + 1; ++r)
                    if (r != i) f.verts.push_back(tau.verts[r]);
                auto [fid, shift] = K.locate(j, f);
                if (fid < 0) throw std::logic_error("face of a cell is not a cell");
                CoboundaryEntry e;
                e.face = fid;
                e.coface = cid;
                e.sign = (i % 2 == 0) ? 1 : -1;
                e.offset = shift;
                K.coboundary[j].push_back(e);
            }
        }
    }

    return K;
}

PeriodicComplex subdivide(const PeriodicComplex& complex) {
    if (complex.n_per_axis < 1 || complex.rank < 1)
        throw std::invalid_argument("subdivide: input is not a Kuhn grid complex");
    // Dyadic Freudenthal refinement of a Kuhn grid equals the Kuhn complex on
    // the doubled grid.
    return build_torus_complex(complex.rank, 2 * complex.n_per_axis, complex.lattice_basis);
}

MeshStats mesh_stats(const PeriodicComplex& complex) {
    MeshStats s;
    s.mesh = 0.0;
    s.fullness_min = std::numeric_limits<double>::infinity();
    const int g = complex.rank;
    for (const auto& top : complex.top_simplices_raw) {
        double diam = 0.0;
        std::vector<Vec> pos;
        pos.reserve(top.verts.size());
        for (const auto& v : top.verts) pos.push_back(complex.position(v));
        for (std::size_t a = 0; a < pos.size(); ++a)
            for (std::size_t b = a + 1; b < pos.size(); ++b)
                diam = std::max(diam, (pos[a] - pos[b]).norm());
        Mat edges(g, g);
        for (int r = 0; r < g; ++r) edges.col(r) = pos[r + 1] - pos[0];
        double vol = std::abs(edges.determinant());
        for (int r = 2; r <= g; ++r) vol /= r;
        s.mesh = std::max(s.mesh, diam);
        s.fullness_min = std::min(s.fullness_min, vol / std::pow(diam, g));
    }
    return s;
}

}  // namespace specgap
