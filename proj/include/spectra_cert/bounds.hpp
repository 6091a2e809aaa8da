#pragma once

// The certification bounds. Each function is a pure formula over eigenvalues
// and Rayleigh quotients; gap collapse raises NumericError so callers can
// mark the bound as undefined instead of reporting garbage.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spectra_cert/errors.hpp"

namespace spectra_cert {

namespace detail {

constexpr double kGapEps = 1e-12;

inline void check_inputs(const Eigen::VectorXd& eigenvalues, const Eigen::VectorXd& gammas) {
    const int k = static_cast<int>(gammas.size());
    if (k < 1) throw InputError("need at least one Rayleigh quotient");
    if (static_cast<int>(eigenvalues.size()) < k + 1)
        throw InputError("need eigenvalues through lambda_{k+1}");
    for (int i = 1; i < k; ++i)
        if (gammas(i) < gammas(i - 1) - 1e-12)
            throw InputError("Rayleigh quotients must be ascending");
}

}  // namespace detail

// (sum_i gamma_i - k*lambda_1) / (lambda_{k+1} - lambda_1), clamped at zero.
inline double bound_thm1(const Eigen::VectorXd& eigenvalues, const Eigen::VectorXd& gammas) {
    detail::check_inputs(eigenvalues, gammas);
    const int k = static_cast<int>(gammas.size());
    const double lam1 = eigenvalues(0), lamk1 = eigenvalues(k);
    if (lamk1 <= lam1 + detail::kGapEps)
        throw NumericError("gap collapse: lambda_{k+1} <= lambda_1");
    return std::max(0.0, (gammas.sum() - k * lam1) / (lamk1 - lam1));
}

// k * rho / lambda_{k+1}; rho is the k-way expansion surrogate of a concrete
// partition unless an exact value is available.
inline double bound_cor2(double rho, int k, double lambda_k1) {
    if (rho < 0.0) throw InputError("rho must be nonnegative");
    if (k < 1) throw InputError("k must be positive");
    if (lambda_k1 <= 0.0) throw NumericError("lambda_{k+1} = 0: bound undefined");
    return k * rho / lambda_k1;
}

// One recursion step: (sum_{i=q+1}^k (gamma_i - lambda_{q+1}) +
// lambda_{k+1} * E_q) / (lambda_{k+1} - lambda_{q+1}), clamped at zero.
inline double bound_thm3_step(const Eigen::VectorXd& eigenvalues,
                              const Eigen::VectorXd& gammas, int q, double prior_error) {
    detail::check_inputs(eigenvalues, gammas);
    const int k = static_cast<int>(gammas.size());
    if (q < 0 || q >= k) throw InputError("need 0 <= q < k");
    if (prior_error < 0.0) throw InputError("prior error must be nonnegative");
    const double lam_lo = eigenvalues(q), lam_hi = eigenvalues(k);
    if (lam_hi <= lam_lo + detail::kGapEps)
        throw NumericError("gap collapse: lambda_{k+1} <= lambda_{q+1}");
    double num = lam_hi * prior_error;
    for (int i = q; i < k; ++i) num += gammas(i) - lam_lo;
    return std::max(0.0, num / (lam_hi - lam_lo));
}

struct RecursiveBound {
    double total = 0.0;
    std::vector<double> per_group;
};

// Applies the recursion group by group: group t spans Rayleigh indices
// (q_{t-1}, q_t], its step uses lambda_{q_t + 1} as the closing eigenvalue
// and the sum of all previous group bounds as the carried error.
inline RecursiveBound bound_thm3_total(const Eigen::VectorXd& eigenvalues,
                                       const Eigen::VectorXd& gammas,
                                       const std::vector<int>& boundaries) {
    detail::check_inputs(eigenvalues, gammas);
    const int k = static_cast<int>(gammas.size());
    if (boundaries.size() < 2 || boundaries.front() != 0 || boundaries.back() != k)
        throw InputError("boundaries must run 0 = q_0 < ... < q_m = k");
    for (std::size_t t = 1; t < boundaries.size(); ++t)
        if (boundaries[t] <= boundaries[t - 1])
            throw InputError("boundaries must be strictly increasing");

    RecursiveBound out;
    for (std::size_t t = 1; t < boundaries.size(); ++t) {
        const int lo = boundaries[t - 1], hi = boundaries[t];
        const double lam_lo = eigenvalues(lo), lam_hi = eigenvalues(hi);
        if (lam_hi <= lam_lo + detail::kGapEps)
            throw NumericError("gap collapse in group " + std::to_string(t) +
                               ": lambda_" + std::to_string(hi + 1) +
                               " <= lambda_" + std::to_string(lo + 1));
        double num = lam_hi * out.total;
        for (int i = lo; i < hi; ++i) num += gammas(i) - lam_lo;
        const double step = std::max(0.0, num / (lam_hi - lam_lo));
        out.per_group.push_back(step);
        out.total += step;
    }
    return out;
}

// sum_{i=2}^k (gamma_i - lambda_2) / (lambda_{k+1} - lambda_2) for a set
// with g_1 = f_1; identical to bound_thm3_step(q=1, E=0).
inline double bound_cor4(const Eigen::VectorXd& eigenvalues, const Eigen::VectorXd& gammas) {
    detail::check_inputs(eigenvalues, gammas);
    const int k = static_cast<int>(gammas.size());
    if (k < 2) throw InputError("bound_cor4 needs k >= 2");
    const double lam2 = eigenvalues(1), lamk1 = eigenvalues(k);
    if (lamk1 <= lam2 + detail::kGapEps)
        throw NumericError("gap collapse: lambda_{k+1} <= lambda_2");
    double num = 0.0;
    for (int i = 1; i < k; ++i) num += gammas(i) - lam2;
    return std::max(0.0, num / (lamk1 - lam2));
}

struct DigraphBounds {
    double rayleigh_bound = 0.0;  // (chi* L chi - lambda_1)/(lambda_2 - lambda_1)
    double psi_bound = 0.0;       // (4 Psi     - lambda_1)/(lambda_2 - lambda_1)
};

inline DigraphBounds bound_thm5(double lambda1, double lambda2, double chi_rayleigh,
                                double psi) {
    if (lambda2 <= lambda1 + detail::kGapEps)
        throw NumericError("gap collapse: lambda_2 <= lambda_1");
    DigraphBounds b;
    b.rayleigh_bound = std::max(0.0, (chi_rayleigh - lambda1) / (lambda2 - lambda1));
    b.psi_bound = std::max(0.0, (4.0 * psi - lambda1) / (lambda2 - lambda1));
    return b;
}

struct LaenenSunResult {
    double eta = 0.0;     // lambda_2 / (1 - (4/k) theta); meaningless if !eta_defined
    bool eta_defined = false;
    bool applicable = false;  // requires eta > 1
    double bound = 0.0;       // (eta - 1)^{-1} when applicable
};

// Comparison bound computed from lambda_2 of the ceil(2*pi*k)-th root
// Hermitian Laplacian and the path objective theta. eta <= 1 is a defined
// outcome (not applicable), not an error.
inline LaenenSunResult bound_laenen_sun(double lambda2, double theta, int k) {
    if (k < 2) throw InputError("bound_laenen_sun needs k >= 2");
    LaenenSunResult r;
    const double denom = 1.0 - (4.0 / k) * theta;
    if (std::abs(denom) < 1e-15) return r;  // eta undefined
    r.eta = lambda2 / denom;
    r.eta_defined = true;
    if (r.eta > 1.0) {
        r.applicable = true;
        r.bound = 1.0 / (r.eta - 1.0);
    }
    return r;
}

struct MisclassificationBound {
    double bound = 0.0;
    bool applicable = false;  // the lemma's precondition on U
};

// Volume of misclassified vertices after an approximate k-means step:
// 8 (2 + alpha) U / D^2, applicable when U <= (1/5) D^{-1} (2+alpha)^{-1}
// min_i vol(S_i).
inline MisclassificationBound kmeans_misclassification_bound(double U, double D,
                                                             double alpha,
                                                             double min_cluster_vol) {
    if (D <= 0.0) throw InputError("centroid separation D must be positive");
    if (U < 0.0 || alpha < 0.0 || min_cluster_vol <= 0.0)
        throw InputError("invalid misclassification inputs");
    MisclassificationBound r;
    r.bound = 8.0 * (2.0 + alpha) * U / (D * D);
    r.applicable = U <= 0.2 / (D * (2.0 + alpha)) * min_cluster_vol;
    return r;
}

}  // namespace spectra_cert
