#pragma once

#include <set>

#include "gkz/geometry.hpp"

namespace gkz {

enum class Locus { Hyperplane, Infinity, T, Tprime };

const char* locus_name(Locus l);

struct SlopeWitness {
    Q s;
    Index facet;
    QVec covector;
    Q multiplicity;  // normalized volume of conv(0, facet points)
};

struct SlopeReport {
    Locus locus;
    int j = -1;  // column for the coordinate loci
    std::vector<Q> slopes;
    std::vector<SlopeWitness> witnesses;
    Q multiplicity() const;
};

SlopeReport slopes_along_hyperplane(const ConfigMatrix& A, int j);
SlopeReport slopes_at_infinity(const ConfigMatrix& A, int j);
SlopeReport modified_slopes_along_T(const ConfigMatrix& A, const IVec& w);
SlopeReport modified_slopes_along_Tprime(const ConfigMatrix& A, const IVec& w);

// ∃h with h·col > 0 for every column.
bool is_pointed(const QMat& M);

// Ã(w) = (A 0; w 1) and A_w = (A; w).
IMat atilde(const ConfigMatrix& A, const IVec& w);
QMat a_w(const ConfigMatrix& A, const IVec& w);

struct RegularityReport {
    bool regular = false;      // condition (c): no modified slope along T
    bool condition_a = false;  // equality of the two face sets below
    bool consistent = false;   // (a) and (c) agree
    std::set<Index> left;      // cells of A_η by w_η, η facet of the positive umbrella
    std::set<Index> right;     // positive-umbrella facets of A_η', η' cell of A by w
};

RegularityReport is_regular_along_T(const ConfigMatrix& A, const IVec& w);

}  // namespace gkz
