#pragma once

// Assembles every applicable certification bound, the exactly computed
// subspace distances they promise to dominate, and run metadata into one
// report; serialises to a versioned JSON schema. Undefined bounds carry an
// explicit reason instead of a value, and non-finite numbers are never
// emitted.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectra_cert/bounds.hpp"
#include "spectra_cert/clustering.hpp"
#include "spectra_cert/graph.hpp"
#include "spectra_cert/indicators.hpp"
#include "spectra_cert/spectral.hpp"

namespace spectra_cert {

inline constexpr const char* kReportSchemaVersion = "1.0";

struct BoundValue {
    std::optional<double> value;
    std::string reason;   // set when undefined
    bool vacuous = false; // defined but above the trivial cap
};

struct ClusteringInfo {
    std::vector<int> assignment;
    double objective = 0.0;
    std::optional<double> recovery_sym_diff_vol;
    std::optional<double> recovery_fraction;
};

struct BoundReport {
    int k = 0;
    int k_tilde = 0;  // root-of-unity order of the Hermitian representation
    std::string representation;
    std::string input_description;
    int n_vertices = 0;
    int n_edges = 0;
    bool directed = false;

    std::vector<double> eigenvalues_used;  // lambda_1 .. lambda_{k+1} (digraph: 2)
    std::vector<double> gammas;            // indicator Rayleigh quotients, ascending
    std::vector<double> gammas_ritz;       // Ritz values of the indicator span
    std::vector<int> group_boundaries;
    std::string groups_source;  // "auto" | "auto-single" | "user"

    BoundValue thm1, cor2, thm3, cor4, thm5_rayleigh, thm5_psi, laenen_sun;

    double true_distance = 0.0;  // exact distance the undirected/digraph bounds target
    std::optional<double> true_distance_first_replaced;  // target of cor4
    std::vector<double> per_group_true;
    std::vector<double> per_group_bound;

    std::optional<double> psi, rho_tilde, theta, eta;
    std::optional<MisclassificationBound> misclassification;
    std::optional<MisclassificationInputs> misclassification_inputs_used;
    std::vector<std::string> warnings;
    std::optional<ClusteringInfo> clustering;
};

struct CertifyOptions {
    RepresentationKind kind = RepresentationKind::normalized_laplacian;
    std::vector<int> group_boundaries;  // empty: detect automatically
    int max_groups = 1 << 20;
    double gap_fraction = 0.1;
};

namespace detail {

template <typename F>
inline BoundValue try_bound(F&& f) {
    BoundValue b;
    try {
        b.value = f();
    } catch (const NumericError& e) {
        b.reason = e.what();
    }
    return b;
}

inline void flag_vacuous(BoundValue& b, double cap) {
    if (b.value && *b.value > cap) b.vacuous = true;
}

}  // namespace detail

// Certification of an undirected graph against a k-way partition. The
// recursive bound is evaluated on the Ritz basis of the indicator span;
// when groups are auto-detected the single-group split is kept instead if
// it certifies a smaller total (both are valid certificates).
inline BoundReport certify_undirected(const Graph& g, const Partition& p,
                                      const CertifyOptions& opts = {}) {
    if (g.directed()) throw InputError("certify_undirected needs an undirected graph");
    if (representation_is_directed(opts.kind))
        throw InputError("undirected certification needs an undirected representation");
    const int k = p.k();
    if (k < 2) throw InputError("certification needs k >= 2");
    if (k + 1 > g.size())
        throw InputError("certification needs k < N for lambda_{k+1}");

    const Representation rep = build_representation(g, opts.kind);
    const EigenSystem eigs = eigensystem(rep, k + 1);
    const IndicatorSet ind = degree_indicators(g, p, rep.matrix);
    const Eigen::MatrixXcd F_k = eigs.vectors.leftCols(k);

    BoundReport r;
    r.k = k;
    r.k_tilde = k;
    r.representation = representation_name(opts.kind);
    r.n_vertices = g.size();
    r.n_edges = static_cast<int>(g.edges().size());
    r.directed = false;
    r.eigenvalues_used.assign(eigs.eigenvalues.data(), eigs.eigenvalues.data() + k + 1);
    r.gammas.assign(ind.rayleigh.data(), ind.rayleigh.data() + k);
    r.true_distance = true_subspace_distance(F_k, ind.vectors);

    const double lam1 = eigs.eigenvalues(0);
    if (ind.rayleigh.sum() - k * lam1 < -1e-8)
        r.warnings.push_back("thm1 numerator negative beyond tolerance; clamped");
    r.thm1 = detail::try_bound([&] { return bound_thm1(eigs.eigenvalues, ind.rayleigh); });

    r.rho_tilde = kway_expansion(g, p);
    r.cor2 = detail::try_bound([&] { return bound_cor2(*r.rho_tilde, k, eigs.eigenvalues(k)); });

    const IndicatorSet ritz = ritz_rotate(ind, rep.matrix);
    r.gammas_ritz.assign(ritz.rayleigh.data(), ritz.rayleigh.data() + k);

    std::vector<int> bnd;
    if (!opts.group_boundaries.empty()) {
        bnd = opts.group_boundaries;
        r.groups_source = "user";
        r.thm3 = detail::try_bound([&] {
            const auto rb = bound_thm3_total(eigs.eigenvalues, ritz.rayleigh, bnd);
            r.per_group_bound = rb.per_group;
            return rb.total;
        });
    } else {
        // Detected grouping, falling back to the single group when it either
        // collapses or certifies a larger total; both are valid certificates.
        std::vector<int> detected{0, k};
        try {
            detected = detect_gap_groups(eigs.eigenvalues, k, opts.max_groups,
                                         opts.gap_fraction);
        } catch (const NumericError&) {
        }
        bnd = detected;
        r.groups_source = "auto";
        r.thm3 = detail::try_bound([&] {
            std::optional<RecursiveBound> best;
            try {
                best = bound_thm3_total(eigs.eigenvalues, ritz.rayleigh, detected);
            } catch (const NumericError&) {
            }
            if (detected.size() > 2) {
                try {
                    const auto single =
                        bound_thm3_total(eigs.eigenvalues, ritz.rayleigh, {0, k});
                    if (!best || single.total < best->total) {
                        best = single;
                        bnd = {0, k};
                        r.groups_source = "auto-single";
                    }
                } catch (const NumericError&) {
                }
            }
            if (!best)
                throw NumericError("gap collapse: lambda_{k+1} <= lambda_1");
            r.per_group_bound = best->per_group;
            return best->total;
        });
    }
    r.group_boundaries = bnd;
    for (std::size_t t = 1; t < bnd.size(); ++t) {
        const int lo = bnd[t - 1], hi = bnd[t];
        r.per_group_true.push_back(
            true_subspace_distance(eigs.vectors.middleCols(lo, hi - lo), ind.vectors));
        double num = 0.0;
        for (int i = lo; i < hi; ++i) num += ritz.rayleigh(i) - eigs.eigenvalues(lo);
        if (num < -1e-8)
            r.warnings.push_back("thm3 group " + std::to_string(t) +
                                 " numerator negative beyond tolerance; clamped");
    }

    r.cor4 = detail::try_bound([&]() -> double {
        const double lam2 = eigs.eigenvalues(1), lamk1 = eigs.eigenvalues(k);
        double num = 0.0;
        double target_true = 0.0;
        try {
            const IndicatorSet rf = replace_first(ind, eigs.vectors.col(0), rep.matrix);
            target_true = true_subspace_distance(F_k, rf.vectors);
            for (int i = 1; i < k; ++i) num += rf.rayleigh(i) - lam2;
        } catch (const NumericError&) {
            // rank collapse: f_1 already lies in the indicator span, so a
            // basis with g_1 = f_1 exists inside it; the remaining Rayleigh
            // sum is the trace of the projected operator minus lambda_1,
            // whatever that basis is
            num = (ind.rayleigh.sum() - eigs.eigenvalues(0)) - (k - 1) * lam2;
            target_true = true_subspace_distance(F_k, ind.vectors);
            r.warnings.push_back(
                "cor4: f1 inside the indicator span; used the trace form");
        }
        if (lamk1 <= lam2 + 1e-12)
            throw NumericError("gap collapse: lambda_{k+1} <= lambda_2");
        r.true_distance_first_replaced = target_true;
        if (num < -1e-8)
            r.warnings.push_back("cor4 numerator negative beyond tolerance; clamped");
        return std::max(0.0, num / (lamk1 - lam2));
    });

    detail::flag_vacuous(r.thm1, k);
    detail::flag_vacuous(r.cor2, k);
    detail::flag_vacuous(r.thm3, k);
    detail::flag_vacuous(r.cor4, k);

    r.thm5_rayleigh.reason = r.thm5_psi.reason = r.laenen_sun.reason =
        "digraph-path bound on an undirected graph";
    return r;
}

namespace detail {

inline Eigen::VectorXd eigenvalues_only(const Eigen::MatrixXcd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigendecomposition failed to converge");
    return solver.eigenvalues();
}

}  // namespace detail

// Certification of a digraph against a k-way cyclic cluster ordering, using
// the Hermitian Laplacian with root order k. Psi and theta are evaluated at
// the supplied partition (the exact optima are NP-hard), and the report
// says so via groups_source-independent quality fields.
inline BoundReport certify_digraph(const Graph& g, const Partition& p) {
    if (!g.directed()) throw InputError("certify_digraph needs a digraph");
    const int k = p.k();
    if (k < 2) throw InputError("digraph certification needs k >= 2");
    if (g.size() < 2) throw InputError("digraph certification needs N >= 2");

    const Representation rep =
        build_representation(g, RepresentationKind::normalized_hermitian_laplacian, k);
    const EigenSystem eigs = eigensystem(rep, 2);
    const IndicatorSet chi = digraph_chi(g, p, rep.matrix);

    BoundReport r;
    r.k = k;
    r.k_tilde = k;
    r.representation = representation_name(rep.kind);
    r.n_vertices = g.size();
    r.n_edges = static_cast<int>(g.edges().size());
    r.directed = true;
    r.eigenvalues_used = {eigs.eigenvalues(0), eigs.eigenvalues(1)};
    r.gammas = {chi.rayleigh(0)};
    r.psi = cyclic_expansion(g, p);
    r.theta = theta_k(g, p);
    r.rho_tilde = kway_expansion(g, p);
    r.true_distance =
        true_subspace_distance(eigs.vectors.leftCols(1), chi.vectors);

    try {
        const auto b =
            bound_thm5(eigs.eigenvalues(0), eigs.eigenvalues(1), chi.rayleigh(0), *r.psi);
        r.thm5_rayleigh.value = b.rayleigh_bound;
        r.thm5_psi.value = b.psi_bound;
    } catch (const NumericError& e) {
        r.thm5_rayleigh.reason = e.what();
        r.thm5_psi.reason = e.what();
    }

    const int ls_root = static_cast<int>(std::ceil(2.0 * std::numbers::pi * k));
    const Representation ls_rep =
        build_representation(g, RepresentationKind::normalized_hermitian_laplacian, ls_root);
    const Eigen::VectorXd ls_vals = detail::eigenvalues_only(ls_rep.matrix);
    const auto ls = bound_laenen_sun(ls_vals(1), *r.theta, k);
    if (ls.eta_defined) r.eta = ls.eta;
    if (ls.applicable)
        r.laenen_sun.value = ls.bound;
    else
        r.laenen_sun.reason = ls.eta_defined
                                  ? "eta <= 1: comparison bound not applicable"
                                  : "1 - (4/k) theta vanishes: eta undefined";

    detail::flag_vacuous(r.thm5_rayleigh, 1.0);
    detail::flag_vacuous(r.thm5_psi, 1.0);
    detail::flag_vacuous(r.laenen_sun, 1.0);

    r.thm1.reason = r.cor2.reason = r.thm3.reason = r.cor4.reason =
        "undirected-path bound on a digraph";
    return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline nlohmann::json json_opt(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

inline nlohmann::json json_bound(const BoundValue& b) {
    return b.value && std::isfinite(*b.value) ? nlohmann::json(*b.value)
                                              : nlohmann::json(nullptr);
}

}  // namespace detail

// Flat two-line CSV of the scalar report fields; undefined values are NA.
inline std::string report_to_csv(const BoundReport& r) {
    auto cell = [](const std::optional<double>& v) -> std::string {
        if (!v || !std::isfinite(*v)) return "NA";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", *v);
        return buf;
    };
    std::string out =
        "k,k_tilde,representation,thm1,cor2,thm3,cor4,thm5_rayleigh,thm5_psi,"
        "laenen_sun,true_distance,psi,rho_tilde,theta,eta,recovery_fraction\n";
    out += std::to_string(r.k) + "," + std::to_string(r.k_tilde) + "," + r.representation;
    for (const auto* b : {&r.thm1, &r.cor2, &r.thm3, &r.cor4, &r.thm5_rayleigh,
                          &r.thm5_psi, &r.laenen_sun})
        out += "," + cell(b->value);
    out += "," + cell(std::optional<double>(r.true_distance));
    for (const auto* q : {&r.psi, &r.rho_tilde, &r.theta, &r.eta}) out += "," + cell(*q);
    out += "," + cell(r.clustering ? r.clustering->recovery_fraction
                                   : std::optional<double>{});
    out += "\n";
    return out;
}

inline nlohmann::json report_to_json(const BoundReport& r) {
    using nlohmann::json;
    json bounds = {
        {"thm1", detail::json_bound(r.thm1)},
        {"cor2", detail::json_bound(r.cor2)},
        {"thm3", detail::json_bound(r.thm3)},
        {"cor4", detail::json_bound(r.cor4)},
        {"thm5_rayleigh", detail::json_bound(r.thm5_rayleigh)},
        {"thm5_psi", detail::json_bound(r.thm5_psi)},
        {"laenen_sun", detail::json_bound(r.laenen_sun)},
    };
    json reasons = json::object();
    json vacuous = json::array();
    const std::pair<const char*, const BoundValue*> all[] = {
        {"thm1", &r.thm1},       {"cor2", &r.cor2},
        {"thm3", &r.thm3},       {"cor4", &r.cor4},
        {"thm5_rayleigh", &r.thm5_rayleigh}, {"thm5_psi", &r.thm5_psi},
        {"laenen_sun", &r.laenen_sun},
    };
    for (const auto& [name, b] : all) {
        if (!b->value && !b->reason.empty()) reasons[name] = b->reason;
        if (b->vacuous) vacuous.push_back(name);
    }

    json clustering = nullptr;
    if (r.clustering) {
        json recovery = nullptr;
        if (r.clustering->recovery_sym_diff_vol)
            recovery = {{"sym_diff_vol", *r.clustering->recovery_sym_diff_vol},
                        {"fraction", *r.clustering->recovery_fraction}};
        clustering = {{"assignment", r.clustering->assignment},
                      {"objective", detail::json_number(r.clustering->objective)},
                      {"recovery", recovery}};
    }

    json details = {
        {"gammas_ritz", r.gammas_ritz},
        {"per_group_true", r.per_group_true},
        {"per_group_bound", r.per_group_bound},
        {"groups_source", r.groups_source},
        {"true_distance_first_replaced", detail::json_opt(r.true_distance_first_replaced)},
        {"bound_reasons", reasons},
        {"vacuous", vacuous},
        {"warnings", r.warnings},
    };
    if (r.misclassification) {
        details["misclassification"] = {
            {"bound", detail::json_number(r.misclassification->bound)},
            {"applicable", r.misclassification->applicable},
            {"U", detail::json_number(r.misclassification_inputs_used->U)},
            {"D", detail::json_number(r.misclassification_inputs_used->D)},
            {"alpha", detail::json_number(r.misclassification_inputs_used->alpha)},
            {"min_cluster_vol",
             detail::json_number(r.misclassification_inputs_used->min_cluster_vol)},
        };
    } else {
        details["misclassification"] = nullptr;
    }

    return json{
        {"spec_version", kReportSchemaVersion},
        {"input",
         {{"description", r.input_description},
          {"n_vertices", r.n_vertices},
          {"n_edges", r.n_edges},
          {"directed", r.directed},
          {"k", r.k},
          {"k_tilde", r.k_tilde},
          {"representation", r.representation}}},
        {"spectrum", r.eigenvalues_used},
        {"gammas", r.gammas},
        {"groups", r.group_boundaries},
        {"bounds", bounds},
        {"true_distance", detail::json_number(r.true_distance)},
        {"quality",
         {{"psi", detail::json_opt(r.psi)},
          {"rho_tilde", detail::json_opt(r.rho_tilde)},
          {"theta", detail::json_opt(r.theta)},
          {"eta", detail::json_opt(r.eta)}}},
        {"clustering", clustering},
        {"details", details},
    };
}

}  // namespace spectra_cert
