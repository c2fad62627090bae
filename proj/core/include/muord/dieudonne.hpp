#pragma once

#include <vector>

#include "muord/datum.hpp"
#include "muord/errors.hpp"
#include "muord/zpn.hpp"

namespace muord::dieudonne {

// M_epsilon over Z/p^n: free of rank f0 with basis e_tau, tau in Z/f0,
// F e_{tau-1} = p^{epsilon_tau} e_tau and V e_tau = p^{1-epsilon_tau} e_{tau-1}.
// The residue field is the prime field, so F and V are honest linear maps.
struct EpsilonModule {
    int f0 = 0;
    zpn::Ring ring;
    std::vector<int> epsilon;
    zpn::Mat F, V;  // f0 x f0, monomial
};

EpsilonModule build_epsilon_module(const std::vector<int>& epsilon, long long p, int n);

enum class ModuleKind { Multiplicative, Etale, BiInfinitesimal };

ModuleKind classify(const std::vector<int>& epsilon);

// Direct sum of epsilon-modules with multiplicities, graded by tau.  The
// grade-tau component is free of rank = sum of multiplicities; F maps grade
// tau-1 to grade tau by the diagonal monomial block.
struct ProductModule {
    int f0 = 0;
    zpn::Ring ring;
    std::vector<std::pair<std::vector<int>, int>> factors;  // (epsilon, multiplicity)
    int rank_per_grade = 0;

    // Block of F from grade (tau-1 mod f0) into grade tau.
    zpn::Mat f_step(int tau) const;
};

ProductModule product_module(const std::vector<DecompositionFactor>& factors, long long p, int n);

// deg_tau = length of the tau-component of N/FN on the p-torsion N.
std::vector<int> partial_degrees_p_torsion(const EpsilonModule& m);
std::vector<int> partial_degrees_p_torsion(const ProductModule& m);

// The mu-ordinary module of a place; requires n >= f+1 (L) resp. 2f+1 (U)
// so the kernel computations below stay exact.
ProductModule assemble_mu_ordinary(const PlaceDatum& place, long long p, int n);

struct KernelSubgroupReport {
    int index = 0;                      // i in 1..f0
    int height = 0;                     // length = log_p of the order
    std::vector<int> partial_degrees;   // per grade tau
};

// The Frobenius-kernel chain C_i = pi^{f0-i} (ker F^{f0} cap ker pi^{f0-i+1})
// of the assembled module, with pi acting as p.  Reports are ordered by i and
// the chain C_1 <= ... <= C_{f0} is verified as literal containment.
std::vector<KernelSubgroupReport> frobenius_kernels(const ProductModule& m, const PlaceDatum& place);

}  // namespace muord::dieudonne
