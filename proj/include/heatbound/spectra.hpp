#pragma once

#include <iosfwd>
#include <vector>

#include "heatbound/geometry.hpp"

namespace heatbound::spectra {

struct Level {
    double lambda;
    long multiplicity;
};

struct Spectrum {
    std::vector<Level> levels;  // strictly increasing, all <= lambda_max
    double lambda_max;
    geometry::Domain domain;
    double volume;
    int d;

    double lambda1() const { return levels.front().lambda; }
    long count() const;  // eigenvalues with multiplicity
};

// Every Dirichlet eigenvalue <= lambda_max of a box, a union of disjoint
// boxes, or a ball in d = 2, 3.
Spectrum enumerate_eigenvalues(const geometry::Domain& domain, double lambda_max);

// Smallest lambda_max whose certified tail at t_min is below 1e-12 of Kac(t_min).
double default_lambda_max(int d, double t_min);

struct HeatTrace {
    double value;
    double tail_bound;  // rigorous bound on the omitted part of the trace

    bool certified(double rel_tol = 1e-10) const { return tail_bound <= rel_tol * value; }
};

HeatTrace heat_trace_exact(const Spectrum& spectrum, double t);

// Sum of mult * (Lambda - lambda)_+^sigma; sigma = 0 counts lambda < Lambda.
double riesz_mean_exact(const Spectrum& spectrum, double sigma, double Lambda);

// Eigenvalues strictly below Lambda, with multiplicity.
long counting_function(const Spectrum& spectrum, double Lambda);

// CSV with columns index, lambda, multiplicity.
void write_csv(const Spectrum& spectrum, std::ostream& out);

}  // namespace heatbound::spectra
