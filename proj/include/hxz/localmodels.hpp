#pragma once

#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "hxz/roots.hpp"

namespace hxz {

// Exact rational polynomial, ascending coefficients.
using QPoly = std::vector<mpq_class>;

int qdegree(const QPoly& p);
mpq_class qeval(const QPoly& p, const mpq_class& x);
CPoly to_cpoly(const QPoly& p);

mpq_class pochhammer(const mpq_class& a, int k);
mpz_class binomial(int n, int k);

struct ShefferFamily {
    int alpha = 0;
    int m = 1;
    std::vector<QPoly> polys;
    mpq_class beta_param;  // -1 - alpha/m
};

ShefferFamily sheffer_seq(int alpha, int m, int N);
QPoly sheffer_explicit(int alpha, int m, int n);

// n! L_n^(a) by the three-term recurrence.
QPoly scaled_laguerre(int a, int n);

struct LaguerreReport {
    int alpha = 0;
    int n = 0;
    mpq_class max_diff;
    bool exact = false;
};

LaguerreReport laguerre_check(int alpha, int n);

// <u_j, x^k> = (1/j!) sum_r (-1)^r C(j,r) (lambda_r)_k
mpq_class monomial_moment(int alpha, int m, int j, int k);
mpq_class morth_moment(int alpha, int m, int j, int nu, int n);

struct MomentTable {
    int alpha = 0;
    int m = 1;
    std::map<std::tuple<int, int, int>, mpq_class> entries;  // (j, nu, n)
    std::vector<mpq_class> lambda_r;
};

MomentTable moment_table(int alpha, int m, int nu_max, int n_max);

// sum_{n <= N} <u_j, x^nu Pi_n> t^n / n! as a polynomial in t
QPoly moment_generating_sum(int alpha, int m, int j, int nu, int N);
// (1-t)^(m nu) / j! sum_r (-1)^r C(j,r) (lambda_r)_nu (1-t)^r
QPoly moment_generating_closed(int alpha, int m, int j, int nu);

int ord0(int alpha, int m, int n);
// Order of vanishing at 0 read off the coefficients.
int ord0_exact(const QPoly& p);

// Max deviation between sum_{n<=N} Pi_n(x) t^n/n! and the Taylor polynomial of (1-t)^alpha exp(x(1-(1-t)^(-m))).
BigReal generating_function_check(int alpha, int m, int N, const BigComplex& x, const BigComplex& t);

BigComplex v_branch(int m, const BigComplex& zeta);

mpq_class c_m(int m);
double mu_zeta(int m, double phi);
double mu_density(int m, double phi);

struct MicroLimit {
    int m = 1;
    mpq_class cm;
    std::vector<double> phi;      // decreasing in zeta order below
    std::vector<double> zeta;     // ascending
    std::vector<double> density;  // per unit zeta
    std::vector<double> cdf;      // ascending, normalized
    double total = 0.0;           // raw quadrature mass before normalization

    double cdf_at(double z) const;
    double quantile(double u) const;
};

MicroLimit micro_limit(int m, int grid_size = 20000);

double mp_density(double zeta);
double mp_cdf(double zeta);

struct RescaledZeros {
    int alpha = 0;
    int m = 1;
    int n = 0;
    int zeros_at_origin = 0;
    std::vector<BigComplex> zeta;  // nonzero zeros of Pi_n divided by n
    EmpiricalMeasure measure;      // all n zeros on the zeta scale, weight 1/n each
    long bits_used = 0;
};

RescaledZeros rescaled_empirical(int alpha, int m, int n);

// n^(1/m)(z - a) scale: w = eps_nu eta zeta^(-1/m) over all m roots, with eta^m = -lambda.
EmpiricalMeasure pushforward(const RescaledZeros& rz, const BigComplex& lambda, int eta_rotation = 0);

// One-sample Kolmogorov-Smirnov distance of sorted samples against cdf.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace hxz
