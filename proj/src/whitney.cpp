#include "specgap/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace specgap {

namespace {

int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return static_cast<int>(r);
}

std::vector<std::vector<std::vector<int>>> build_combo_cache() {
    std::vector<std::vector<std::vector<int>>> cache;
    for (int g = 0; g <= kMaxRank + 1; ++g)
        for (int j = 0; j <= g; ++j) {
            std::vector<std::vector<int>> combos;
            std::vector<int> idx(j);
            for (int i = 0; i < j; ++i) idx[i] = i;
            if (j == 0) {
                combos.push_back({});
            } else {
                while (true) {
                    combos.push_back(idx);
                    int i = j - 1;
                    while (i >= 0 && idx[i] == g - j + i) --i;
                    if (i < 0) break;
                    ++idx[i];
                    for (int r = i + 1; r < j; ++r) idx[r] = idx[r - 1] + 1;
                }
            }
            cache.push_back(std::move(combos));
        }
    return cache;
}

const std::vector<std::vector<int>>& combos_for(int g, int j) {
    static const auto cache = build_combo_cache();
    int pos = 0;
    for (int gg = 0; gg < g; ++gg) pos += gg + 1;
    return cache[pos + j];
}

// Barycentric frame of a top simplex: positions, gradients, volume.
struct TopFrame {
    std::vector<Vec> pos;    // g+1 vertex positions
    std::vector<Vec> grad;   // g+1 barycentric gradients
    double vol = 0;

    explicit TopFrame(const PeriodicComplex& K, const Cell& top) {
        const int g = K.rank;
        pos.reserve(g + 1);
        for (const auto& v : top.verts) pos.push_back(K.position(v));
        Mat E(g, g);
        for (int r = 0; r < g; ++r) E.col(r) = pos[r + 1] - pos[0];
        const double det = E.determinant();
        vol = std::abs(det);
        for (int r = 2; r <= g; ++r) vol /= r;
        if (vol <= 0 || !std::isfinite(vol)) throw std::runtime_error("degenerate simplex in complex");
        Mat Einv = E.inverse();
        grad.assign(g + 1, Vec::Zero(g));
        for (int r = 1; r <= g; ++r) grad[r] = Einv.row(r - 1).transpose();
        for (int r = 1; r <= g; ++r) grad[0] -= grad[r];
    }

    // barycentric coordinates of a point
    Vec barycentric(const Vec& x) const {
        const int g = static_cast<int>(pos.size()) - 1;
        Vec mu(g + 1);
        mu[0] = 1.0;
        for (int r = 1; r <= g; ++r) {
            mu[r] = grad[r].dot(x - pos[0]);
            mu[0] -= mu[r];
        }
        return mu;
    }
};

// wedge of the gradients listed in `slots` (order matters), as a tensor
AntisymTensor wedge_of_grads(const TopFrame& F, const std::vector<int>& slots, int g) {
    const int p = static_cast<int>(slots.size());
    AntisymTensor T = AntisymTensor::zero(g, p);
    const auto& combos = combos_for(g, p);
    Mat sub(p, p);
    for (std::size_t c = 0; c < combos.size(); ++c) {
        for (int r = 0; r < p; ++r)
            for (int s = 0; s < p; ++s) sub(r, s) = F.grad[slots[r]][combos[c][s]];
        T.comp[static_cast<Eigen::Index>(c)] = sub.determinant();
    }
    return T;
}

// Whitney form of the simplex spanned by T-local vertex slots (orientation =
// the listed order), evaluated at barycentric coordinates mu of the top.
AntisymTensor whitney_value(const TopFrame& F, const std::vector<int>& slots, const Vec& mu,
                            int g) {
    const int p = static_cast<int>(slots.size()) - 1;
    AntisymTensor out = AntisymTensor::zero(g, p);
    double pfact = 1;
    for (int r = 2; r <= p; ++r) pfact *= r;
    for (int r = 0; r <= p; ++r) {
        std::vector<int> rest;
        rest.reserve(p);
        for (int s = 0; s <= p; ++s)
            if (s != r) rest.push_back(slots[s]);
        AntisymTensor w = wedge_of_grads(F, rest, g);
        const double c = pfact * ((r % 2 == 0) ? 1.0 : -1.0) * mu[slots[r]];
        out.comp += c * w.comp;
    }
    return out;
}

// det of the Gram matrix grad[a[r]] . grad[b[s]]
double gram_det(const TopFrame& F, const std::vector<int>& a, const std::vector<int>& b) {
    const int p = static_cast<int>(a.size());
    if (p == 0) return 1.0;
    Mat G(p, p);
    for (int r = 0; r < p; ++r)
        for (int s = 0; s < p; ++s) G(r, s) = F.grad[a[r]].dot(F.grad[b[s]]);
    return G.determinant();
}

// Exact integral over the top of <W a, W b> for faces given by slot lists.
double whitney_pair_integral(const TopFrame& F, const std::vector<int>& A,
                             const std::vector<int>& B, int g) {
    const int p = static_cast<int>(A.size()) - 1;
    double pfact = 1;
    for (int r = 2; r <= p; ++r) pfact *= r;
    const double mass_same = 2.0 * F.vol / ((g + 1.0) * (g + 2.0));
    const double mass_diff = F.vol / ((g + 1.0) * (g + 2.0));
    double acc = 0;
    std::vector<int> ra, rb;
    for (int r = 0; r <= p; ++r) {
        ra.clear();
        for (int s = 0; s <= p; ++s)
            if (s != r) ra.push_back(A[s]);
        for (int q = 0; q <= p; ++q) {
            rb.clear();
            for (int s = 0; s <= p; ++s)
                if (s != q) rb.push_back(B[s]);
            const double sg = ((r + q) % 2 == 0) ? 1.0 : -1.0;
            const double mu_int = (A[r] == B[q]) ? mass_same : mass_diff;
            acc += sg * mu_int * gram_det(F, ra, rb);
        }
    }
    return pfact * pfact * acc;
}

// All cover translates T + m of fundamental tops that contain the given cover
// cell; reports the T-local slots of the cell's vertices (in the cell's
// stored vertex order) and the translation m.
struct CoverTop {
    int top_index;
    Offset shift;
    std::vector<int> slots;
};

std::vector<CoverTop> cover_tops_containing(const PeriodicComplex& K, const Cell& cell) {
    std::vector<CoverTop> out;
    const int g = K.rank;
    for (std::size_t ti = 0; ti < K.top_simplices_raw.size(); ++ti) {
        const Cell& T = K.top_simplices_raw[ti];
        for (int s0 = 0; s0 <= g; ++s0) {
            if (T.verts[s0].index != cell.verts[0].index) continue;
            Offset m{};
            for (int a = 0; a < g; ++a) m[a] = cell.verts[0].offset[a] - T.verts[s0].offset[a];
            std::vector<int> slots;
            bool all = true;
            for (const auto& v : cell.verts) {
                int found = -1;
                for (int s = 0; s <= g; ++s) {
                    const auto& w = T.verts[s];
                    if (w.index != v.index) continue;
                    bool match = true;
                    for (int a = 0; a < g; ++a)
                        if (w.offset[a] + m[a] != v.offset[a]) match = false;
                    if (match) {
                        found = s;
                        break;
                    }
                }
                if (found < 0) {
                    all = false;
                    break;
                }
                slots.push_back(found);
            }
            if (all) out.push_back({static_cast<int>(ti), m, std::move(slots)});
        }
    }
    return out;
}

struct SimplexQuadrature {
    std::vector<Vec> points;  // barycentric-free coordinates xi in the standard simplex
    std::vector<double> weights;
};

// Duffy map of a tensor Gauss-Legendre grid onto the standard j-simplex;
// weights sum to 1/j! (the simplex volume).
SimplexQuadrature simplex_rule(int dim, int order) {
    SimplexQuadrature Q;
    if (dim == 0) {
        Q.points.push_back(Vec::Zero(0));
        Q.weights.push_back(1.0);
        return Q;
    }
    std::vector<double> x, w;
    gauss_legendre_01(order, x, w);
    std::vector<int> idx(dim, 0);
    while (true) {
        Vec xi = Vec::Zero(dim);
        double weight = 1.0, remaining = 1.0;
        for (int a = 0; a < dim; ++a) {
            const double u = x[idx[a]];
            xi[a] = u * remaining;
            weight *= w[idx[a]] * remaining;
            remaining -= xi[a];
        }
        Q.points.push_back(xi);
        Q.weights.push_back(weight);
        int a = dim - 1;
        while (a >= 0 && ++idx[a] == order) idx[a--] = 0;
        if (a < 0) break;
    }
    return Q;
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev initial guess, on [-1,1]
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 + x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

AntisymTensor AntisymTensor::zero(int rank, int degree) {
    AntisymTensor t;
    t.rank = rank;
    t.degree = degree;
    t.comp = Vec::Zero(binomial(rank, degree));
    return t;
}

double AntisymTensor::apply(const std::vector<Vec>& vectors) const {
    if (degree == 0) return comp[0];
    const auto& combos = combos_for(rank, degree);
    Mat sub(degree, degree);
    double acc = 0;
    for (std::size_t c = 0; c < combos.size(); ++c) {
        for (int r = 0; r < degree; ++r)
            for (int s = 0; s < degree; ++s) sub(r, s) = vectors[s][combos[c][r]];
        acc += comp[static_cast<Eigen::Index>(c)] * sub.determinant();
    }
    return acc;
}

const std::vector<std::vector<int>>& index_combinations(int g, int j) { return combos_for(g, j); }

CMat MassFamily::evaluate(const Vec& k) const {
    CMat M = CMat::Zero(size, size);
    for (const auto& e : entries) {
        double phase = 0;
        for (int a = 0; a < rank; ++a) phase += k[a] * e.offset[a];
        M(e.row, e.col) += e.value * std::polar(1.0, phase);
    }
    return M;
}

AntisymTensor whitney_form_at(const PeriodicComplex& complex, int degree, int cell_id,
                              const Vec& barycentric) {
    const Cell& sigma = complex.cells.at(degree).at(cell_id);
    const int g = complex.rank;
    if (barycentric.size() != degree + 1)
        throw std::invalid_argument("barycentric coordinate count must be degree+1");
    if (std::abs(barycentric.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("barycentric coordinates must sum to 1");
    Vec x = Vec::Zero(g);
    for (int i = 0; i <= degree; ++i) x += barycentric[i] * complex.position(sigma.verts[i]);

    for (const auto& ct : cover_tops_containing(complex, sigma)) {
        Cell shifted = complex.top_simplices_raw[ct.top_index];
        for (auto& v : shifted.verts)
            for (int a = 0; a < g; ++a) v.offset[a] += ct.shift[a];
        TopFrame F(complex, shifted);
        Vec mu = F.barycentric(x);
        if (mu.minCoeff() >= -1e-12) return whitney_value(F, ct.slots, mu, g);
    }
    return AntisymTensor::zero(g, degree);
}

MassFamily mass_family(const PeriodicComplex& complex, int degree) {
    const int g = complex.rank;
    if (degree < 0 || degree > g) throw std::invalid_argument("mass degree out of range");
    MassFamily M;
    M.degree = degree;
    M.rank = g;
    M.size = complex.cell_count(degree);

    struct Key {
        int a, b;
        Offset m;
        bool operator<(const Key& o) const {
            if (a != o.a) return a < o.a;
            if (b != o.b) return b < o.b;
            return m < o.m;
        }
    };
    std::map<Key, double> acc;

    const auto& subs = combos_for(g + 1, degree + 1);
    for (const auto& top : complex.top_simplices_raw) {
        TopFrame F(complex, top);
        // canonical id, sign and offset of every face of this top
        struct FaceInfo {
            int id, sign;
            Offset off;
            const std::vector<int>* slots;
        };
        std::vector<FaceInfo> faces;
        faces.reserve(subs.size());
        for (const auto& s : subs) {
            Cell f;
            for (int i : s) f.verts.push_back(top.verts[i]);
            Cell canon = f;
            const int sign = canonicalize_cell(canon);
            auto it = complex.cell_ids[degree].find(canon);
            if (it == complex.cell_ids[degree].end())
                throw std::logic_error("face missing from cell table");
            const Offset off = std::min_element(f.verts.begin(), f.verts.end())->offset;
            faces.push_back({it->second, sign, off, &s});
        }
        for (const auto& fa : faces)
            for (const auto& fb : faces) {
                const double val =
                    fa.sign * fb.sign * whitney_pair_integral(F, *fa.slots, *fb.slots, g);
                Offset m{};
                for (int a = 0; a < g; ++a) m[a] = fb.off[a] - fa.off[a];
                acc[Key{fa.id, fb.id, m}] += val;
            }
    }
    M.entries.reserve(acc.size());
    for (const auto& [key, val] : acc)
        if (std::abs(val) > 1e-300) M.entries.push_back({key.a, key.b, key.m, val});
    return M;
}

double integrate_whitney_over_cell(const PeriodicComplex& complex, int degree, int cell_id,
                                   int target_id, const Offset& target_offset,
                                   int quadrature_order) {
    const int g = complex.rank;
    Cell tau = complex.cells.at(degree).at(target_id);
    for (auto& v : tau.verts)
        for (int a = 0; a < g; ++a) v.offset[a] += target_offset[a];
    const Cell& sigma = complex.cells.at(degree).at(cell_id);

    const auto tau_tops = cover_tops_containing(complex, tau);
    if (tau_tops.empty()) throw std::logic_error("cell has no containing top simplex");
    const auto sig_tops = cover_tops_containing(complex, sigma);

    // a cover top containing tau and sigma; the tangential trace along tau
    // vanishes otherwise
    const CoverTop* hit = nullptr;
    const std::vector<int>* sigma_slots = nullptr;
    for (const auto& ct : tau_tops) {
        for (const auto& st : sig_tops)
            if (st.top_index == ct.top_index && st.shift == ct.shift) {
                hit = &ct;
                sigma_slots = &st.slots;
                break;
            }
        if (hit) break;
    }
    if (!hit) return 0.0;

    Cell shifted = complex.top_simplices_raw[hit->top_index];
    for (auto& v : shifted.verts)
        for (int a = 0; a < g; ++a) v.offset[a] += hit->shift[a];
    TopFrame F(complex, shifted);

    std::vector<Vec> tpos;
    for (const auto& v : tau.verts) tpos.push_back(complex.position(v));
    std::vector<Vec> edges;
    for (int r = 1; r <= degree; ++r) edges.push_back(tpos[r] - tpos[0]);

    const auto Q = simplex_rule(degree, quadrature_order);
    double acc = 0;
    for (std::size_t q = 0; q < Q.points.size(); ++q) {
        Vec x = tpos[0];
        for (int r = 0; r < degree; ++r) x += Q.points[q][r] * edges[r];
        AntisymTensor val = whitney_value(F, *sigma_slots, F.barycentric(x), g);
        acc += Q.weights[q] * val.apply(edges);
    }
    return acc;
}

DerhamResult derham_map(const SampledForm& form, const PeriodicComplex& complex,
                        int quadrature_order) {
    const int g = complex.rank;
    const int j = form.degree;
    if (j < 0 || j > g) throw std::invalid_argument("form degree out of range");

    if (form.periodic) {
        // spot-check periodicity at a few cell midpoints
        for (int cid = 0; cid < std::min(3, complex.cell_count(j)); ++cid) {
            const Cell& c = complex.cells[j][cid];
            Vec x = Vec::Zero(g);
            for (const auto& v : c.verts) x += complex.position(v);
            x /= static_cast<double>(c.verts.size());
            AntisymTensor v0 = form.value(x);
            for (int a = 0; a < g; ++a) {
                AntisymTensor v1 = form.value(x + complex.lattice_basis.col(a));
                if ((v0.comp - v1.comp).cwiseAbs().maxCoeff() >
                    1e-10 * (1.0 + v0.comp.cwiseAbs().maxCoeff()))
                    throw std::invalid_argument("form is not lattice periodic");
            }
        }
    }

    auto integrate = [&](int order) {
        Vec out = Vec::Zero(complex.cell_count(j));
        const auto Q = simplex_rule(j, order);
        for (int cid = 0; cid < complex.cell_count(j); ++cid) {
            const Cell& c = complex.cells[j][cid];
            std::vector<Vec> tpos;
            for (const auto& v : c.verts) tpos.push_back(complex.position(v));
            std::vector<Vec> edges;
            for (int r = 1; r <= j; ++r) edges.push_back(tpos[r] - tpos[0]);
            double acc = 0;
            for (std::size_t q = 0; q < Q.points.size(); ++q) {
                Vec x = tpos[0];
                for (int r = 0; r < j; ++r) x += Q.points[q][r] * edges[r];
                acc += Q.weights[q] * form.value(x).apply(edges);
            }
            out[cid] = acc;
        }
        return out;
    };

    DerhamResult R;
    R.values = integrate(quadrature_order);
    Vec refined = integrate(2 * quadrature_order);
    const double scale = std::max(1e-30, refined.cwiseAbs().maxCoeff());
    R.order_check_error = (R.values - refined).cwiseAbs().maxCoeff() / scale;
    R.order_check_ok = R.order_check_error <= 1e-8;
    return R;
}

}  // namespace specgap
