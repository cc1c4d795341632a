#pragma once

#include <vector>

#include "hxz/cpoly.hpp"

namespace hxz {

struct Root {
    BigComplex z;
    int multiplicity = 1;
    BigReal error_radius;  // Newton-style radius deg*|p|/|p'|, or the cluster spread
};

struct RootSet {
    std::vector<Root> roots;
    int poly_degree = 0;
    BigReal residual;  // max over roots of |p(z)| / sum |a_k||z|^k

    int total_multiplicity() const;
    std::vector<BigComplex> locations() const;
};

struct RootOptions {
    int max_sweeps = 0;  // 0 selects a degree-dependent default
    int polish_sweeps = 2;
    std::vector<BigComplex> initial;  // starting points for the nonzero roots; empty selects the default
};

RootSet find_roots(const CPoly& p, const RootOptions& opt = {});

struct DistinctRoot {
    BigComplex z;
    int multiplicity = 1;
};

// Distinct zeros of p with exact orders: roots of rad(p), orders by local Taylor data.
std::vector<DistinctRoot> distinct_roots(const CPoly& p);

// Threshold a RootSet residual must stay under to count as certified.
BigReal certified_residual_threshold();

struct EmpiricalMeasure {
    struct Atom {
        BigComplex location;
        BigReal weight;
    };
    std::vector<Atom> atoms;
    BigReal total;
};

EmpiricalMeasure empirical_measure(const RootSet& rs, const BigReal& norm);

struct DiscCount {
    int count = 0;
    int flagged = 0;  // roots within 10 error radii of the circle
};

DiscCount count_in_disc(const RootSet& rs, const BigComplex& center, const BigReal& r);

}  // namespace hxz
