#pragma once

#include <cstdint>

#include "dbeval/catalog.hpp"

// Probability evaluators, all returning log2 of the probability.
namespace dbeval::formulas {

double one(const Params&);
double half_pow_n(const Params& p);
double three_quarters_pow_n(const Params& p);
double seven_eighths_pow_n(const Params& p);

double mp_mafia(const Params& p);
double mp_distance(const Params& p);

double tree_mafia(const Params& p);
double tree_distance(const Params& p);

double poulidor_mafia(const Params& p);
double poulidor_distance(const Params& p);

double ykhl_mafia(const Params& p);

double ka_mafia(const Params& p);
double ka_distance(const Params& p);

double ski_mafia(const Params& p);
double ski_terrorist(const Params& p);

double tma_fraud(const Params& p);

// Number of predefined challenges in a KA instance: floor(p_d * n), exact on decimal grids.
std::uint32_t ka_alpha(const Params& p);

// log2(2^a + 2^b) without overflow.
double log2_sum(double a, double b);

}  // namespace dbeval::formulas
