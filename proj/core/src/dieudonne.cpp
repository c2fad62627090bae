#include "muord/dieudonne.hpp"

#include <algorithm>
#include <cassert>

namespace muord::dieudonne {

using zpn::Mat;
using zpn::Ring;

EpsilonModule build_epsilon_module(const std::vector<int>& epsilon, long long p, int n) {
    for (int e : epsilon)
        if (e != 0 && e != 1) throw Error(Errc::BadEpsilon, "epsilon entries must be 0 or 1");
    if (epsilon.empty()) throw Error(Errc::BadEpsilon, "epsilon must be nonempty");
    EpsilonModule m;
    m.f0 = static_cast<int>(epsilon.size());
    m.ring = Ring(p, n);
    m.epsilon = epsilon;
    m.F = Mat(m.f0, m.f0);
    m.V = Mat(m.f0, m.f0);
    for (int tau = 0; tau < m.f0; ++tau) {
        int prev = (tau + m.f0 - 1) % m.f0;
        long long pe = epsilon[tau] ? p : 1;
        long long pv = epsilon[tau] ? 1 : p;
        m.F.at(tau, prev) = m.ring.reduce(pe);   // F e_{tau-1} = p^{eps_tau} e_tau
        m.V.at(prev, tau) = m.ring.reduce(pv);   // V e_tau = p^{1-eps_tau} e_{tau-1}
    }
    return m;
}

ModuleKind classify(const std::vector<int>& epsilon) {
    bool all1 = std::all_of(epsilon.begin(), epsilon.end(), [](int e) { return e == 1; });
    bool all0 = std::all_of(epsilon.begin(), epsilon.end(), [](int e) { return e == 0; });
    if (all1) return ModuleKind::Multiplicative;
    if (all0) return ModuleKind::Etale;
    return ModuleKind::BiInfinitesimal;
}

ProductModule product_module(const std::vector<DecompositionFactor>& factors, long long p, int n) {
    ProductModule m;
    if (factors.empty()) throw Error(Errc::BadEpsilon, "product of no factors");
    m.f0 = static_cast<int>(factors[0].epsilon.size());
    m.ring = Ring(p, n);
    for (const auto& f : factors) {
        if (static_cast<int>(f.epsilon.size()) != m.f0)
            throw Error(Errc::BadEpsilon, "factors must share the grading length");
        m.factors.emplace_back(f.epsilon, f.multiplicity);
        m.rank_per_grade += f.multiplicity;
    }
    return m;
}

Mat ProductModule::f_step(int tau) const {
    Mat step(rank_per_grade, rank_per_grade);
    int off = 0;
    for (const auto& [eps, mult] : factors) {
        long long c = eps[tau] ? ring.reduce(ring.p) : 1;
        for (int k = 0; k < mult; ++k) step.at(off + k, off + k) = c;
        off += mult;
    }
    return step;
}

std::vector<int> partial_degrees_p_torsion(const ProductModule& m) {
    // N = M[p] = p^{n-1} M, graded; (FN)_tau = F(N_{tau-1}).
    const Ring& R = m.ring;
    long long pn1 = 1;
    for (int i = 0; i < R.n - 1; ++i) pn1 *= R.p;
    std::vector<int> deg(m.f0, 0);
    for (int tau = 0; tau < m.f0; ++tau) {
        Mat torsion = zpn::scalar_mul(R, pn1, Mat::identity(m.rank_per_grade));
        Mat image = zpn::mul(R, m.f_step(tau), torsion);
        deg[tau] = zpn::image_length(R, torsion) - zpn::image_length(R, image);
    }
    return deg;
}

std::vector<int> partial_degrees_p_torsion(const EpsilonModule& m) {
    std::vector<DecompositionFactor> one{{m.epsilon, 1}};
    return partial_degrees_p_torsion(product_module(one, m.ring.p, m.ring.n));
}

ProductModule assemble_mu_ordinary(const PlaceDatum& place, long long p, int n) {
    int need = (place.kind == PlaceCase::L ? place.f : 2 * place.f) + 1;
    if (n < need)
        throw Error(Errc::TruncationTooSmall,
                    "need n >= " + std::to_string(need) + " for exact kernel computations");
    return product_module(mu_ordinary_decomposition(place), p, n);
}

std::vector<KernelSubgroupReport> frobenius_kernels(const ProductModule& m, const PlaceDatum& place) {
    const Ring& R = m.ring;
    int f0 = m.f0;
    if (R.n < f0 + 1) throw Error(Errc::TruncationTooSmall, "truncation below f0+1");
    (void)place;

    // F^{f0} restricted to grade tau is the cycle of step blocks ending at tau.
    std::vector<Mat> fpow(f0);
    for (int tau = 0; tau < f0; ++tau) {
        Mat acc = Mat::identity(m.rank_per_grade);
        // steps into grades tau-f0+1, ..., tau (i.e. the full cycle)
        for (int k = f0 - 1; k >= 0; --k) {
            int g = ((tau - k) % f0 + f0) % f0;
            acc = zpn::mul(R, m.f_step(g), acc);
        }
        fpow[tau] = std::move(acc);
    }

    auto p_power = [&](int e) {
        long long x = 1;
        for (int i = 0; i < e; ++i) x = R.mul(x, R.p);
        return x;
    };

    // Per grade: C_i = p^{f0-i} (ker F^{f0} cap ker p^{f0-i+1}).
    std::vector<std::vector<Mat>> chain(f0 + 1);  // chain[i][tau], i in 1..f0
    for (int i = 1; i <= f0; ++i) {
        chain[i].resize(f0);
        for (int tau = 0; tau < f0; ++tau) {
            Mat kf = zpn::kernel(R, fpow[tau]);
            Mat ptor = zpn::kernel(R, zpn::scalar_mul(R, p_power(f0 - i + 1), Mat::identity(m.rank_per_grade)));
            Mat inter = zpn::span_intersect(R, kf, ptor);
            chain[i][tau] = zpn::scalar_mul(R, p_power(f0 - i), inter);
        }
    }

    std::vector<KernelSubgroupReport> reports;
    for (int i = 1; i <= f0; ++i) {
        KernelSubgroupReport rep;
        rep.index = i;
        rep.partial_degrees.resize(f0);
        std::vector<int> len(f0);
        for (int tau = 0; tau < f0; ++tau) {
            len[tau] = zpn::image_length(R, chain[i][tau]);
            rep.height += len[tau];
        }
        for (int tau = 0; tau < f0; ++tau) {
            int prev = (tau + f0 - 1) % f0;
            Mat img = zpn::mul(R, m.f_step(tau), chain[i][prev]);
            // F-stability of the chain member, then deg_tau = len(C_tau / F C_{tau-1}).
            if (!zpn::span_contains(R, chain[i][tau], img))
                throw std::logic_error("frobenius kernel chain member is not F-stable");
            rep.partial_degrees[tau] = len[tau] - zpn::image_length(R, img);
        }
        if (i > 1) {
            for (int tau = 0; tau < f0; ++tau)
                if (!zpn::span_contains(R, chain[i][tau], chain[i - 1][tau]))
                    throw std::logic_error("frobenius kernel chain is not increasing");
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace muord::dieudonne
