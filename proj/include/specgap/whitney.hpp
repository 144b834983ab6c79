#pragma once

#include <functional>
#include <vector>

#include "specgap/complex.hpp"

// Whitney forms on a periodic complex, the Whitney inner product realized as
// character-twisted mass matrices, and the de Rham map (simplexwise
// integration). Mass entries are exact: the integrands are polynomials in the
// barycentric coordinates and are integrated by the closed monomial formula.

namespace specgap {

// Antisymmetric j-tensor over R^g stored as components against the ascending
// index combinations of size j (lexicographic order).
struct AntisymTensor {
    int rank = 0;
    int degree = 0;
    Vec comp;  // size C(rank, degree)

    static AntisymTensor zero(int rank, int degree);
    // Evaluate on j vectors.
    double apply(const std::vector<Vec>& vectors) const;
};

// Ascending index combinations of size j from {0..g-1}.
const std::vector<std::vector<int>>& index_combinations(int g, int j);

struct MassFamily {
    int degree = 0;
    int size = 0;
    int rank = 0;
    struct Entry {
        int row, col;
        Offset offset;
        double value;
    };
    std::vector<Entry> entries;

    // M_j(k), Hermitian positive definite for every character.
    CMat evaluate(const Vec& k) const;
};

// Value of the Whitney form of a cell at a point given in the cell's own
// barycentric coordinates (coordinates may be extrapolated outside [0,1]).
// Points outside the open star of the cell yield the zero tensor.
AntisymTensor whitney_form_at(const PeriodicComplex& complex, int degree, int cell_id,
                              const Vec& barycentric);

MassFamily mass_family(const PeriodicComplex& complex, int degree);

// Integral of the Whitney form of cell (degree, cell_id) over the cover cell
// (degree, target_id) + target_offset. Realizes the de Rham map on Whitney
// forms; equals the Kronecker delta by property (ii) of the Whitney map.
double integrate_whitney_over_cell(const PeriodicComplex& complex, int degree, int cell_id,
                                   int target_id, const Offset& target_offset,
                                   int quadrature_order = 5);

struct SampledForm {
    int degree = 0;
    std::function<AntisymTensor(const Vec&)> value;
    bool periodic = true;
};

struct DerhamResult {
    Vec values;                     // one integral per fundamental-domain j-cell
    double order_check_error = 0;   // relative disagreement between order q and 2q
    bool order_check_ok = true;
};

// Simplexwise integration of a form, fixed-order Gauss quadrature with a
// doubled-order self-check.
DerhamResult derham_map(const SampledForm& form, const PeriodicComplex& complex,
                        int quadrature_order = 5);

// Gauss-Legendre rule on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace specgap
