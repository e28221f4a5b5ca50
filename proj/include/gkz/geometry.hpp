#pragma once

#include "gkz/exactla.hpp"

namespace gkz {

// Facet of a hull.  Points y on the facet satisfy covector·y == rhs and all
// points satisfy covector·y <= rhs.  With the origin included, rhs is 1 for
// facets avoiding 0 and 0 otherwise.
struct Face {
    Index indices;
    QVec covector;
    Q rhs;
    bool contains_zero = false;
};

std::vector<Face> hull_facets(const std::vector<QVec>& points, bool with_origin);

struct UmbrellaFace {
    Index indices;
    int dim;  // -1 for the empty face
};

struct Umbrella {
    std::vector<UmbrellaFace> faces;  // sorted by (dim, indices)
    std::vector<Face> facets;         // the facets avoiding the origin
    QVec weights;
    std::vector<Index> faces_of_dim(int k) const;
};

Umbrella umbrella_positive(const QMat& A, const QVec& v);
Umbrella umbrella_positive(const ConfigMatrix& A, const QVec& v);

struct Cell {
    Index indices;
    QVec certificate;  // linear c with c·a_i = w_i on the cell, <= elsewhere
};

// Maximal cells of the regular subdivision of the columns of A induced by w.
std::vector<Cell> regular_subdivision(const QMat& A, const QVec& w);

// w + ε(1,…,1) + εε′w′ as a stack of weights compared lexicographically.
struct PerturbedWeight {
    std::vector<QVec> stages;
    long K = 97;
};

PerturbedWeight perturb_weight(int n, const QVec& w, int stage_count = 3, long K = 97);

struct Triangulation {
    std::vector<Simplex> simplices;
    std::vector<QVec> certificates;  // leading-stage certificate per simplex
    QVec w;
    Q volume() const;
};

Triangulation regular_triangulation(const QMat& A, const QVec& w);
Triangulation regular_triangulation(const QMat& A, const PerturbedWeight& w);
Triangulation regular_triangulation(const ConfigMatrix& A, const QVec& w);
Triangulation regular_triangulation(const ConfigMatrix& A, const PerturbedWeight& w);

// Normalized volume of conv(0, a_i : i in tau) for tau on a hyperplane avoiding 0.
Q pyramid_volume(const QMat& A, const Index& tau);

// |A_σ^{-1} a| as the sum of coordinates.
Q simplex_norm(const Simplex& s, const QVec& a);

bool sigma_in_outer_facet(const QMat& A, const Simplex& s);
Index eta_for_simplex(const QMat& A, const Simplex& s);
bool umbrella_inclusion_check(const QMat& A, const Index& eta);

Index sorted_union(const Index& a, const Index& b);
Index sorted_intersection(const Index& a, const Index& b);

}  // namespace gkz
