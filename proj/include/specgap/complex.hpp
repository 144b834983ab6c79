#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

// Gamma-periodic simplicial complexes with free-abelian deck group Z^g.
// A complex is described by a fundamental domain (cells listed once, with
// vertex references carrying integer lattice offsets) together with signed
// coboundary incidence data. Twisting the incidence matrices by a character
// k in [0,2pi)^g diagonalizes the deck action.

namespace specgap {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using cdouble = std::complex<double>;

constexpr int kMaxRank = 3;

using Offset = std::array<int, kMaxRank>;

struct VertexRef {
    int index = 0;      // into the fundamental-domain vertex list
    Offset offset{};    // lattice offset in Z^g

    friend bool operator==(const VertexRef&, const VertexRef&) = default;
    friend auto operator<=>(const VertexRef& a, const VertexRef& b) {
        if (auto c = a.offset <=> b.offset; c != 0) return c;
        return a.index <=> b.index;
    }
};

// Oriented simplex, canonical form: vertex refs sorted ascending and offsets
// shifted so the first vertex carries offset zero.
struct Cell {
    std::vector<VertexRef> verts;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell& a, const Cell& b) { return a.verts <=> b.verts; }
};

struct CoboundaryEntry {
    int face = 0;     // j-cell id
    int coface = 0;   // (j+1)-cell id
    int sign = 0;     // +1 / -1
    Offset offset{};  // lattice offset of the face inside the coface
};

struct MeshStats {
    double mesh = 0.0;          // max simplex diameter, length units
    double fullness_min = 0.0;  // min over top simplices of vol/diam^g
};

struct PeriodicComplex {
    int rank = 0;                       // deck group Z^g
    int n_per_axis = 0;                 // grid resolution of the Kuhn complex
    Mat lattice_basis;                  // g x g, columns are the translations
    std::vector<Vec> vertex_positions;  // fundamental-domain vertices, R^g
    std::vector<std::vector<Cell>> cells;  // per degree 0..g
    std::vector<std::vector<CoboundaryEntry>> coboundary;  // per degree 0..g-1
    std::vector<Cell> top_simplices_raw;   // path-ordered top simplices

    int cell_count(int degree) const { return static_cast<int>(cells.at(degree).size()); }

    // Position of a vertex reference in the cover.
    Vec position(const VertexRef& v) const;

    // Canonical (id, translation) pair for a simplex given by arbitrary refs;
    // id is -1 when the simplex is not a cell of the complex.
    std::pair<int, Offset> locate(int degree, const Cell& simplex) const;

    // Twisted coboundary d_j(k), size (#(j+1)-cells) x (#j-cells).
    CMat coboundary_matrix(int degree, const Vec& k) const;

    // Euler characteristic of the quotient, alternating cell-count sum.
    long euler_characteristic() const;

    std::map<Cell, int> cell_ids[kMaxRank + 1];
};

// Kuhn-Freudenthal triangulation of the g-torus, n_per_axis cubes per axis,
// tiled Gamma-periodically. g in {1,2,3}; basis columns must be independent.
PeriodicComplex build_torus_complex(int g, int n_per_axis, const Mat& lattice_basis);

// Self-similar dyadic refinement; mesh exactly halves, fullness is preserved.
PeriodicComplex subdivide(const PeriodicComplex& complex);

MeshStats mesh_stats(const PeriodicComplex& complex);

// Canonicalizes a list of vertex refs: sorts and offset-normalizes. Returns
// the parity sign of the sorting permutation (orientation bookkeeping).
int canonicalize_cell(Cell& cell);

}  // namespace specgap
