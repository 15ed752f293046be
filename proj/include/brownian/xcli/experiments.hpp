#pragma once

// Experiment registry behind the brownian-lab driver. Each experiment declares
// its config schema and writes <name>.csv (plus optional companion tables)
// into the output directory. Values depend only on the resolved config; the
// thread count changes speed, never output bytes.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "brownian/fp_estimator.hpp"
#include "brownian/replica_linops.hpp"
#include "brownian/rmt_lab.hpp"
#include "brownian/spin_cluster.hpp"
#include "brownian/syk_cluster.hpp"
#include "brownian/xcli/config.hpp"
#include "brownian/xcli/csv.hpp"

namespace brownian::xcli {

struct RunContext {
    std::string out_dir = ".";
    int threads = 1;

    std::string path(const std::string& file) const { return out_dir + "/" + file; }
};

struct Experiment {
    std::string name;
    std::string summary;
    Schema schema;
    std::function<std::vector<std::string>(const ExperimentConfig&, const RunContext&)> run;
};

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline FieldSpec seed_field() { return {"seed", FieldType::unsigned_integer, "1", "master seed", {}, {}}; }

inline FieldSpec integer_field(std::string name, std::string def, std::string help, double lo, double hi) {
    return {std::move(name), FieldType::integer, std::move(def), std::move(help), lo, hi};
}

inline FieldSpec real_field(std::string name, std::string def, std::string help, std::optional<double> lo = {},
                            std::optional<double> hi = {}) {
    return {std::move(name), FieldType::real, std::move(def), std::move(help), lo, hi};
}

inline int as_int(std::int64_t v) { return static_cast<int>(v); }

inline std::string write(const RunContext& ctx, const std::string& file, const CsvSchema& schema,
                         const std::vector<Row>& rows) {
    emit_csv(ctx.path(file), schema, rows);
    return file;
}

inline std::vector<Row> level_rows(const std::vector<Level>& levels, std::size_t max_levels,
                                   const std::function<Row(std::size_t, const Level&)>& extra) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < levels.size() && i < max_levels; ++i) rows.push_back(extra(i, levels[i]));
    return rows;
}

inline std::vector<double> mean_std_error(const std::vector<double>& v) {
    const auto est = summarize(v, 1, Estimator::folded);
    return {est.mean, est.std_error};
}

// ---------------------------------------------------------------------------

inline std::vector<std::string> run_spin_fp(const ExperimentConfig& c, const RunContext& ctx) {
    const int N = as_int(c.integer("N")), k = as_int(c.integer("k")), guard = as_int(c.integer("guard"));
    const double J = c.real("J"), dt = c.real("dt");
    const auto samples = static_cast<std::size_t>(c.integer("samples"));
    const auto seed = c.unsigned_integer("seed");
    std::vector<double> spectrum;
    if (2 * k * N <= guard) spectrum = spin::effective_spectrum(N, J, k, guard);
    const CsvSchema schema{{"t", ColumnType::real},          {"T", ColumnType::real},
                           {"mc_folded", ColumnType::real},  {"mc_folded_se", ColumnType::real},
                           {"mc_paired", ColumnType::real},  {"mc_paired_se", ColumnType::real},
                           {"exact", ColumnType::real},      {"analytic", ColumnType::real},
                           {"analytic_k1", ColumnType::real}, {"haar", ColumnType::real}};
    std::vector<Row> rows;
    const auto& grid = c.reals("t_grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        spin::BrownianSpinParams p{N, J, dt, t, k, seed};
        const auto sampler = spin::brownian_sampler(p);
        const auto run_seed = derive_seed(seed, {0x737066ULL, i});
        const auto folded = mc_frame_potential(sampler, k, samples, run_seed, Estimator::folded, ctx.threads);
        const auto paired = mc_frame_potential(sampler, k, samples, run_seed, Estimator::paired, ctx.threads);
        const double exact = spectrum.empty() ? kNaN : spin::frame_potential_from_spectrum(spectrum, t);
        rows.push_back({t, 2.0 * t, folded.mean, folded.std_error, paired.mean, paired.std_error, exact,
                        spin::analytic_frame_potential(N, J, k, 2.0 * t),
                        k == 1 ? spin::analytic_frame_potential_k1(N, J, 2.0 * t) : kNaN, spin::factorial(k)});
    }
    return {write(ctx, "spin-fp.csv", schema, rows)};
}

inline std::vector<std::string> run_spin_spectrum(const ExperimentConfig& c, const RunContext& ctx) {
    const int N = as_int(c.integer("N")), k = as_int(c.integer("k")), guard = as_int(c.integer("guard"));
    const double J = c.real("J");
    const auto spectrum = spin::effective_spectrum(N, J, k, guard);
    const double scale = std::max(1.0, std::abs(spectrum.back()));
    const auto levels = group_levels(spectrum, c.real("level_tol") * scale);
    const CsvSchema schema{{"level", ColumnType::integer},
                           {"energy", ColumnType::real},
                           {"degeneracy", ColumnType::integer},
                           {"predicted_energy", ColumnType::real},
                           {"predicted_degeneracy", ColumnType::real}};
    const auto rows = level_rows(levels, static_cast<std::size_t>(c.integer("max_levels")), [&](std::size_t i, const Level& l) {
        double pe = kNaN, pd = kNaN;
        if (i == 0) {
            pe = 0.0;
            pd = spin::factorial(k);
        } else if (i == 1 && k == 1) {
            pe = 12.0 * J * (N - 1) / N;
            pd = 3.0 * N;
        }
        return Row{static_cast<std::int64_t>(i), l.energy, static_cast<std::int64_t>(l.degeneracy), pe, pd};
    });
    std::vector<Row> eig_rows;
    for (std::size_t i = 0; i < spectrum.size(); ++i) eig_rows.push_back({static_cast<std::int64_t>(i), spectrum[i]});
    return {write(ctx, "spin-spectrum.csv", schema, rows),
            write(ctx, "spin-spectrum-eigenvalues.csv", {{"index", ColumnType::integer}, {"eigenvalue", ColumnType::real}},
                  eig_rows)};
}

inline std::vector<std::string> run_syk_fp(const ExperimentConfig& c, const RunContext& ctx) {
    const int N = as_int(c.integer("N")), k = as_int(c.integer("k")), guard = as_int(c.integer("guard"));
    const double J = c.real("J"), dt = c.real("dt");
    const auto samples = static_cast<std::size_t>(c.integer("samples"));
    const auto seed = c.unsigned_integer("seed");
    syk::SykParams p{N, J, k, seed};
    p.validate();
    std::vector<double> spectrum;
    if (k * N <= guard) spectrum = eig_hermitian(syk::build_syk_effective_hamiltonian(N, J, k, guard)).real_parts();
    const CsvSchema schema{{"t", ColumnType::real},         {"T", ColumnType::real},
                           {"mc_folded", ColumnType::real}, {"mc_folded_se", ColumnType::real},
                           {"exact", ColumnType::real},     {"saddle", ColumnType::real},
                           {"asymptotic", ColumnType::real}, {"fermionic_haar", ColumnType::real}};
    std::vector<Row> rows;
    const auto& grid = c.reals("t_grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const auto sampler = syk::brownian_sampler(p, t, dt);
        const auto folded = mc_frame_potential(sampler, k, samples, derive_seed(seed, {0x73796bULL, i}), Estimator::folded,
                                               ctx.threads);
        const double exact = spectrum.empty() ? kNaN : spin::frame_potential_from_spectrum(spectrum, t);
        rows.push_back({t, 2.0 * t, folded.mean, folded.std_error, exact, syk::saddle_frame_potential(N, J, k, 2.0 * t),
                        syk::asymptotic_frame_potential(N, J, k, 2.0 * t),
                        static_cast<double>(fermionic_haar_fp(k))});
    }
    return {write(ctx, "syk-fp.csv", schema, rows)};
}

inline std::vector<std::string> run_syk_spectrum(const ExperimentConfig& c, const RunContext& ctx) {
    const int N = as_int(c.integer("N")), k = as_int(c.integer("k")), guard = as_int(c.integer("guard"));
    const double J = c.real("J");
    const auto spectrum = eig_hermitian(syk::build_syk_effective_hamiltonian(N, J, k, guard)).real_parts();
    const double scale = std::max(1.0, std::abs(spectrum.back()));
    const auto levels = group_levels(spectrum, c.real("level_tol") * scale);
    const CsvSchema schema{{"level", ColumnType::integer},           {"energy", ColumnType::real},
                           {"degeneracy", ColumnType::integer},      {"predicted_energy", ColumnType::real},
                           {"single_majorana_energy", ColumnType::real}, {"predicted_degeneracy", ColumnType::real}};
    const auto rows = level_rows(levels, static_cast<std::size_t>(c.integer("max_levels")), [&](std::size_t i, const Level& l) {
        const double pe = i == 0 ? 0.0 : (i == 1 ? J : kNaN);
        const double pd = i == 0 ? static_cast<double>(fermionic_haar_fp(k)) : kNaN;
        return Row{static_cast<std::int64_t>(i), l.energy, static_cast<std::int64_t>(l.degeneracy), pe,
                   syk::syk_excitation_energy(N, J), pd};
    });
    return {write(ctx, "syk-spectrum.csv", schema, rows)};
}

inline std::vector<std::string> run_syk2(const ExperimentConfig& c, const RunContext& ctx) {
    const int N = as_int(c.integer("N")), guard = as_int(c.integer("guard"));
    const double J = c.real("J");
    const CsvSchema schema{{"k", ColumnType::integer},
                           {"null_dim_4body", ColumnType::integer},
                           {"predicted_4body", ColumnType::integer},
                           {"null_dim_2body", ColumnType::integer},
                           {"predicted_2body", ColumnType::integer}};
    std::vector<Row> rows;
    for (auto kk : c.integers("k_grid")) {
        const int k = as_int(kk);
        const auto four = eig_hermitian(syk::build_syk_effective_hamiltonian(N, J, k, guard));
        const auto two = eig_hermitian(syk::build_quadratic_syk_effective_hamiltonian(N, J, k, guard));
        const auto pred2 = static_cast<std::int64_t>(std::llround(std::tgamma(2.0 * k + 1.0) / std::tgamma(k + 1.0)));
        rows.push_back({static_cast<std::int64_t>(k), static_cast<std::int64_t>(four.null_dim),
                        static_cast<std::int64_t>(fermionic_haar_fp(k)), static_cast<std::int64_t>(two.null_dim), pred2});
    }
    return {write(ctx, "syk2-counterexample.csv", schema, rows)};
}

inline DenseOperator sign_operator(std::size_t D) {
    return DenseOperator(rmt::balanced_sign_operator(D).cast<cplx>(), true);
}

inline std::vector<std::string> run_rmt_spectrum(const ExperimentConfig& c, const RunContext& ctx) {
    const auto D = static_cast<std::size_t>(c.integer("D"));
    const int k = as_int(c.integer("k"));
    const double g = c.real("g");
    const auto samples = static_cast<std::size_t>(c.integer("samples"));
    const auto seed = c.unsigned_integer("seed");
    rmt::RmtParams params{D, g, k, samples, seed};
    params.validate();
    const double tol = g / 10.0;
    const auto n_dark = static_cast<std::size_t>(haar_fp(k));
    struct Result {
        std::vector<cplx> eigenvalues;
        std::size_t dark = 0;
        double gap = 0.0, overlap = 0.0, predicted_gap = 0.0;
    };
    std::vector<Result> results(samples);
    const auto O = sign_operator(D);
    parallel_for(samples, ctx.threads, [&](std::size_t s) {
        const auto H = rmt::sample_goe(D, derive_seed(seed, {D, s}));
        auto& r = results[s];
        r.eigenvalues = rmt::noisy_spectrum(H, O, g, k);
        r.dark = rmt::count_dark(r.eigenvalues, tol);
        r.gap = r.dark == n_dark ? rmt::decay_gap(r.eigenvalues, n_dark, tol) : kNaN;
        r.overlap = k == 1 ? rmt::dark_overlap_k1(H, O, g, r.eigenvalues) : kNaN;
        const auto bulk = rmt::m_bulk_eigenvalues(rmt::build_M_matrix(H, O).matrix().real());
        r.predicted_gap = g * (1.0 - bulk.back());
    });
    const CsvSchema schema{{"sample", ColumnType::integer}, {"index", ColumnType::integer}, {"re", ColumnType::real},
                           {"im", ColumnType::real},         {"dark", ColumnType::integer}, {"predicted_im", ColumnType::real}};
    std::vector<Row> rows;
    for (std::size_t s = 0; s < samples; ++s)
        for (std::size_t i = 0; i < results[s].eigenvalues.size(); ++i) {
            const cplx v = results[s].eigenvalues[i];
            const bool dark = std::abs(v.imag()) < tol;
            rows.push_back({static_cast<std::int64_t>(s), static_cast<std::int64_t>(i), v.real(), v.imag(),
                            static_cast<std::int64_t>(dark), dark ? 0.0 : -g});
        }
    const CsvSchema summary{{"sample", ColumnType::integer},    {"n_dark", ColumnType::integer},
                            {"expected_dark", ColumnType::integer}, {"decay_gap", ColumnType::real},
                            {"first_order_gap", ColumnType::real}, {"dark_overlap", ColumnType::real}};
    std::vector<Row> srows;
    for (std::size_t s = 0; s < samples; ++s)
        srows.push_back({static_cast<std::int64_t>(s), static_cast<std::int64_t>(results[s].dark),
                         static_cast<std::int64_t>(n_dark), results[s].gap, results[s].predicted_gap, results[s].overlap});
    return {write(ctx, "rmt-spectrum.csv", schema, rows), write(ctx, "rmt-spectrum-summary.csv", summary, srows)};
}

inline std::vector<std::string> run_rmt_gap_sweep(const ExperimentConfig& c, const RunContext& ctx) {
    const double g = c.real("g");
    const auto samples = static_cast<std::size_t>(c.integer("samples"));
    const auto seed = c.unsigned_integer("seed");
    std::vector<double> Ds, means, errors;
    for (auto d : c.integers("D_grid")) {
        const auto D = static_cast<std::size_t>(d);
        if (D % 2 != 0) throw ConfigError("field 'D_grid': " + std::to_string(D) + " is odd");
        const auto gaps = rmt::sample_gaps(D, samples, g, seed, ctx.threads);
        const auto ms = mean_std_error(gaps);
        Ds.push_back(static_cast<double>(D));
        means.push_back(ms[0]);
        errors.push_back(ms[1]);
    }
    const auto fit = rmt::fit_gap_model(Ds, means);
    const CsvSchema schema{{"D", ColumnType::integer}, {"inv_sqrt_D", ColumnType::real}, {"mean_gap", ColumnType::real},
                           {"std_error", ColumnType::real}, {"fit", ColumnType::real}, {"g", ColumnType::real}};
    std::vector<Row> rows;
    for (std::size_t i = 0; i < Ds.size(); ++i)
        rows.push_back({static_cast<std::int64_t>(Ds[i]), 1.0 / std::sqrt(Ds[i]), means[i], errors[i],
                        fit.a + fit.b / std::sqrt(Ds[i]) + fit.c / Ds[i], g});
    const CsvSchema fit_schema{{"a", ColumnType::real}, {"b", ColumnType::real}, {"c", ColumnType::real},
                               {"residual", ColumnType::real}, {"g", ColumnType::real}};
    return {write(ctx, "rmt-gap-sweep.csv", schema, rows),
            write(ctx, "rmt-gap-fit.csv", fit_schema, {{fit.a, fit.b, fit.c, fit.residual, g}})};
}

inline std::vector<std::string> run_rmt_semicircle(const ExperimentConfig& c, const RunContext& ctx) {
    const auto D = static_cast<std::size_t>(c.integer("D"));
    if (D % 2 != 0) throw ConfigError("field 'D': must be even");
    const auto samples = static_cast<std::size_t>(c.integer("samples"));
    const int bins = as_int(c.integer("bins"));
    const auto st = rmt::semicircle_statistics(D, samples, c.unsigned_integer("seed"), bins, ctx.threads);
    const double d = static_cast<double>(D);
    double total = 0.0;
    for (double x : st.counts) total += x;
    total += static_cast<double>(st.outside);
    const CsvSchema schema{{"bin_lo", ColumnType::real}, {"bin_hi", ColumnType::real},    {"E", ColumnType::real},
                           {"count", ColumnType::real},  {"expected", ColumnType::real}, {"density", ColumnType::real},
                           {"semicircle", ColumnType::real}};
    std::vector<Row> rows;
    for (int b = 0; b < bins; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        const double lo = st.edges[ub], hi = st.edges[ub + 1], mid = 0.5 * (lo + hi);
        rows.push_back({lo, hi, mid, st.counts[ub], st.expected[ub], st.counts[ub] / (total * (hi - lo)),
                        rmt::semicircle_density(mid, d)});
    }
    const double R = rmt::semicircle_radius(d);
    const CsvSchema summary{{"quantity", ColumnType::text}, {"measured", ColumnType::real}, {"predicted", ColumnType::real}};
    const std::vector<Row> srows{{std::string("chi2_per_bin"), st.chi2_per_bin, 1.0},
                                 {std::string("support_lo"), st.mean_min, 1.0 / d - R},
                                 {std::string("support_hi"), st.mean_max, 1.0 / d + R},
                                 {std::string("entry_mean"), st.entry_mean, 1.0 / d},
                                 {std::string("entry_variance"), st.entry_var, 2.0 / (d * d)},
                                 {std::string("perron_eigenvalue"), st.mean_top, 1.0},
                                 {std::string("outside_support"), static_cast<double>(st.outside), 0.0}};
    return {write(ctx, "rmt-semicircle.csv", schema, rows), write(ctx, "rmt-semicircle-summary.csv", summary, srows)};
}

inline std::vector<std::string> run_design_time(const ExperimentConfig& c, const RunContext& ctx) {
    const double J = c.real("J"), g = c.real("g"), eps = c.real("eps");
    const CsvSchema schema{{"model", ColumnType::text}, {"N", ColumnType::integer}, {"k", ColumnType::integer},
                           {"eps", ColumnType::real},   {"time", ColumnType::real}};
    std::vector<Row> rows;
    for (auto N : c.integers("N_grid"))
        for (auto k : c.integers("k_grid")) {
            rows.push_back({std::string("brownian_spin"), N, k, eps, spin::design_time_spin(as_int(N), as_int(k), J, eps)});
            rows.push_back({std::string("brownian_syk"), N, k, eps, syk::design_time_syk(as_int(N), as_int(k), J, eps)});
            rows.push_back({std::string("noisy_hamiltonian"), N, k, eps,
                            rmt::design_time_hamiltonian(as_int(N), as_int(k), g, eps)});
        }
    return {write(ctx, "design-time.csv", schema, rows)};
}

inline std::vector<std::string> run_haar_baseline(const ExperimentConfig& c, const RunContext& ctx) {
    const auto D = static_cast<std::size_t>(c.integer("D"));
    const auto samples = static_cast<std::size_t>(c.integer("samples"));
    const auto seed = c.unsigned_integer("seed");
    const CsvSchema schema{{"ensemble", ColumnType::text}, {"D", ColumnType::integer},    {"k", ColumnType::integer},
                           {"mc_mean", ColumnType::real},  {"mc_se", ColumnType::real},   {"invariant_rank", ColumnType::integer},
                           {"prediction", ColumnType::real}};
    std::vector<Row> rows;
    for (auto kk : c.integers("k_grid")) {
        const int k = as_int(kk);
        for (bool parity : {false, true}) {
            const auto sampler = parity ? parity_haar_sampler(D) : haar_sampler(D);
            const auto est = mc_frame_potential(sampler, k, samples, derive_seed(seed, {static_cast<std::uint64_t>(k), parity}),
                                                Estimator::paired, ctx.threads);
            std::int64_t rank = -1;
            if (k <= 4 && std::pow(static_cast<double>(D), 2.0 * k) <= 16384.0)
                rank = static_cast<std::int64_t>(invariant_state_rank(D, k, parity));
            const double pred = parity ? static_cast<double>(fermionic_haar_fp(k)) : static_cast<double>(haar_fp(k));
            rows.push_back({std::string(parity ? "parity_haar" : "haar"), static_cast<std::int64_t>(D),
                            static_cast<std::int64_t>(k), est.mean, est.std_error, rank, pred});
        }
    }
    return {write(ctx, "haar-baseline.csv", schema, rows)};
}

}  // namespace detail

inline const std::vector<Experiment>& experiments() {
    using namespace detail;
    static const std::vector<Experiment> registry{
        {"spin-fp", "Brownian spin frame potential vs t: Monte Carlo, exact, closed form",
         {integer_field("N", "2", "spins", 2, 7), real_field("J", "1", "coupling", 0.0),
          integer_field("k", "1", "design order", 1, 4), real_field("dt", "0.01", "Brownian step", 1e-12),
          {"t_grid", FieldType::real_list, "0.05, 0.15, 0.3", "evolution times t", 0.0, {}},
          integer_field("samples", "500", "Monte Carlo samples", 2, 1e9),
          integer_field("guard", "14", "qubit guard for dense H_k", 1, 16), seed_field()},
         run_spin_fp},
        {"spin-spectrum", "Spectrum, gap and degeneracies of the spin H_k",
         {integer_field("N", "3", "spins", 2, 7), real_field("J", "1", "coupling", 0.0),
          integer_field("k", "1", "design order", 1, 3), integer_field("guard", "14", "qubit guard", 1, 16),
          real_field("level_tol", "1e-8", "relative level grouping tolerance", 0.0),
          integer_field("max_levels", "8", "levels written", 1, 1e9), seed_field()},
         run_spin_spectrum},
        {"syk-fp", "Brownian SYK frame potential vs t: Monte Carlo, exact, saddle point",
         {integer_field("N", "4", "Majoranas (even)", 4, 14), real_field("J", "1", "coupling", 0.0),
          integer_field("k", "1", "design order", 1, 3), real_field("dt", "0.01", "Brownian step", 1e-12),
          {"t_grid", FieldType::real_list, "0.5, 1, 2", "evolution times t", 0.0, {}},
          integer_field("samples", "500", "Monte Carlo samples", 2, 1e9),
          integer_field("guard", "14", "qubit guard for dense H_eff", 1, 16), seed_field()},
         run_syk_fp},
        {"syk-spectrum", "Spectrum, gap and ground-state degeneracy of the SYK H_eff",
         {integer_field("N", "6", "Majoranas (even)", 4, 14), real_field("J", "1", "coupling", 0.0),
          integer_field("k", "1", "design order", 1, 3), integer_field("guard", "14", "qubit guard", 1, 16),
          real_field("level_tol", "1e-8", "relative level grouping tolerance", 0.0),
          integer_field("max_levels", "8", "levels written", 1, 1e9), seed_field()},
         run_syk_spectrum},
        {"syk2-counterexample", "Ground-state counts of 4-body vs 2-body SYK H_eff",
         {integer_field("N", "4", "Majoranas (even)", 4, 14), real_field("J", "1", "coupling", 0.0),
          {"k_grid", FieldType::integer_list, "1, 2", "design orders", 1.0, 3.0},
          integer_field("guard", "14", "qubit guard", 1, 16), seed_field()},
         run_syk2},
        {"rmt-spectrum", "Complex spectrum of the noisy-Hamiltonian H_eff with dark states",
         {integer_field("D", "32", "Hilbert dimension (even)", 2, 64), real_field("g", "0.2", "noise strength", 1e-12),
          integer_field("k", "1", "design order", 1, 2), integer_field("samples", "1", "GOE samples", 1, 1e9), seed_field()},
         run_rmt_spectrum},
        {"rmt-gap-sweep", "Mean decay gap vs D and the fit a + b/sqrt(D) + c/D",
         {{"D_grid", FieldType::integer_list, "10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32", "dimensions", 2.0, 64.0},
          integer_field("samples", "200", "GOE samples per D", 1, 1e9), real_field("g", "0.2", "noise strength", 1e-12),
          seed_field()},
         run_rmt_gap_sweep},
        {"rmt-semicircle", "M-matrix eigenvalue histogram against the semicircle law",
         {integer_field("D", "256", "Hilbert dimension (even)", 2, 4096),
          integer_field("samples", "50", "GOE samples", 1, 1e9), integer_field("bins", "40", "histogram bins", 1, 1e6),
          seed_field()},
         run_rmt_semicircle},
        {"design-time", "Design-time formulas for the three models",
         {{"N_grid", FieldType::integer_list, "4, 8, 16, 32, 64", "system sizes", 1.0, {}},
          {"k_grid", FieldType::integer_list, "1, 2, 4", "design orders", 1.0, {}}, real_field("J", "1", "coupling", 1e-300),
          real_field("g", "0.2", "noise strength", 1e-300), real_field("eps", "0.01", "diamond-norm accuracy", 1e-300, 1.0),
          seed_field()},
         run_design_time},
        {"haar-baseline", "Haar and parity-block Haar frame potentials against invariant-state counts",
         {integer_field("D", "4", "dimension", 2, 64), {"k_grid", FieldType::integer_list, "1, 2", "design orders", 1.0, 4.0},
          integer_field("samples", "2000", "Monte Carlo pairs", 2, 1e9), seed_field()},
         run_haar_baseline},
    };
    return registry;
}

inline const Experiment* find_experiment(const std::string& name) {
    for (const auto& e : experiments())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace brownian::xcli
