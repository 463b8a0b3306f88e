#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "config.hpp"
#include "inputs.hpp"
#include "json.hpp"
#include "stablenoise/errors.hpp"
#include "stablenoise/filter.hpp"
#include "stablenoise/fractional.hpp"
#include "stablenoise/grid_noise.hpp"
#include "stablenoise/grid_ops.hpp"
#include "stablenoise/levy.hpp"
#include "stablenoise/parallel.hpp"
#include "stablenoise/parser.hpp"
#include "stablenoise/shot_noise.hpp"
#include "stablenoise/space.hpp"
#include "stablenoise/verify.hpp"

namespace stablenoise::cli {

namespace {

using json = nlohmann::json;

struct settings {
    // law
    double alpha = 2.0;
    double sigma = 1.0;
    double nu = 0.0;
    std::string innovations = "exact";
    double tail_p = 0.5;
    double tail_q = 0.5;
    // integrand
    std::string kernel_expr;
    std::string kernel_m;
    int dim = 1;
    // grid
    double h = 0.1;
    std::string h_list = "0.5,0.1,0.02";
    double eps = 1e-4;
    std::string filter = "identity";
    // fractional
    double beta = 0.75;
    double plus = 1.0;
    double minus = 1.0;
    // shot noise
    std::string space = "box(0,1)";
    double lambda = 1000.0;
    std::string lambda_list = "10,100,1000";
    std::size_t npoints = 1000;
    bool binomial = false;
    // Levy motion
    int q = 2;
    std::string points_file;
    std::string origin;
    // run
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out = "-";
    std::string report;           // optional summary of generators
    std::string report_to = "-";  // report of the report commands
    std::size_t coupled_n = 0;
    double level = 0.01;
    double moment = 1.0;
    double tol = 0.05;
    int refine = 16;
    int cases = 100;
    bool verify = false;
};

// Stream for reference draws, apart from the replica streams of the seed.
std::uint64_t reference_seed(std::uint64_t seed) { return mix64(seed ^ 0x7265666572656e63ULL); }

void add_law(CLI::App* c, settings& s, bool innovations) {
    c->add_option("--alpha", s.alpha, "stability index in (0, 2]");
    c->add_option("--sigma", s.sigma, "scale of the innovation law");
    c->add_option("--nu", s.nu, "skewness in [-1, 1]");
    if (!innovations) return;
    c->add_option("--innovations", s.innovations, "exact, pareto, gaussian or auto (pareto below alpha 2)");
    c->add_option("--tail-p", s.tail_p, "right tail weight of Pareto innovations");
    c->add_option("--tail-q", s.tail_q, "left tail weight of Pareto innovations");
}

void add_kernel(CLI::App* c, settings& s, bool with_dim = true) {
    c->add_option("--kernel", s.kernel_expr, "integrand expression, e.g. exp(-x*x)")->required();
    if (with_dim) c->add_option("--dim", s.dim, "dimension of the lattice")->check(CLI::Range(1, 8));
}

void add_replicas(CLI::App* c, settings& s) {
    c->add_option("--n", s.n, "number of replicas")->check(CLI::PositiveNumber);
    c->add_option("--seed", s.seed, "random seed")->required();
    c->add_option("--threads", s.threads, "worker threads (default: STABLENOISE_THREADS or 1)");
}

void add_csv_out(CLI::App* c, settings& s) {
    c->add_option("--out", s.out, "CSV of replicas (- for stdout)");
    c->add_option("--report", s.report, "optional JSON summary");
}

void add_report_out(CLI::App* c, settings& s) {
    c->add_option("--report", s.report_to, "JSON report (- for stdout)");
}

void add_verify(CLI::App* c, settings& s) {
    c->add_flag("--verify", s.verify, "exit with status 4 when the check fails");
}

innovation_sampler make_innovations(const settings& s, std::uint64_t seed) {
    // auto: innovations in the domain of attraction rather than the limit law
    const std::string mode = s.innovations != "auto" ? s.innovations : s.alpha < 2.0 ? "pareto" : "gaussian";
    switch (parse_innovation_mode(mode)) {
        case innovation_mode::exact_stable:
            return innovation_sampler::exact(stable_params(s.alpha, s.sigma, s.nu), seed);
        case innovation_mode::pareto_tail:
            return innovation_sampler::pareto(tail_spec{s.alpha, s.tail_p, s.tail_q}, seed);
        case innovation_mode::gaussian:
            if (s.alpha != 2.0) throw config_error("gaussian innovations need --alpha 2");
            return innovation_sampler::gaussian(s.sigma, seed);
    }
    throw config_error("unknown innovation mode");
}

json params_json(const stable_params& p) { return {{"alpha", p.alpha}, {"sigma", p.sigma}, {"nu", p.nu}}; }

json stats_json(std::span<const double> x) {
    const sample_stats st = describe(x);
    return {{"mean", st.mean}, {"variance", st.variance}, {"median_abs", median_abs(x)}, {"n", st.n}};
}

json innovations_json(const innovation_sampler& G) {
    json j = {{"mode", to_string(G.mode())}, {"limit", params_json(G.limit())}};
    if (G.mode() == innovation_mode::pareto_tail)
        j["tails"] = {{"alpha", G.tails().alpha}, {"p", G.tails().p}, {"q", G.tails().q}};
    return j;
}

void emit(const std::string& path, const CLI::App& sub, json body) {
    body["config"] = resolved_config(sub);
    write_text(path, body.dump(2) + "\n");
}

replica_set single_column(std::vector<double> v) {
    replica_set rs;
    rs.columns = {"0"};
    rs.values = std::move(v);
    return rs;
}

std::vector<std::string> point_ids(std::size_t k) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < k; ++i) ids.push_back(std::to_string(i));
    return ids;
}

int study_exit(const settings& s, bool pass) { return s.verify && !pass ? exit_acceptance : exit_ok; }

json report_json(const convergence_report& r) { return json::parse(r.to_json()); }

space_fn as_space_fn(const kernel& f) {
    return [f](std::span<const double> x) { return f(x); };
}

// ----------------------------------------------------------------- generators

int run_sample_stable(const settings& s, const CLI::App& sub) {
    const stable_params p(s.alpha, s.sigma, s.nu);
    const replica_set rs = single_column(sample_stable(p, s.n, s.seed));
    write_text(s.out, rs.to_csv());
    if (!s.report.empty()) emit(s.report, sub, {{"law", params_json(p)}, {"stats", stats_json(rs.values)}});
    return exit_ok;
}

enum class grid_kind { plain, dirac, filtered };

int run_grid(const settings& s, const CLI::App& sub, grid_kind kind) {
    const kernel f = parse_kernel(s.kernel_expr, s.dim);
    const innovation_sampler G = make_innovations(s, s.seed);
    grid_noise noise(grid_spec(s.dim, s.h), G);
    prepare_options po;
    po.eps = s.eps;
    noise_functional nf;
    json extra;
    if (kind == grid_kind::plain) {
        nf = noise.prepare(f, po);
    } else if (kind == grid_kind::dirac) {
        nf = noise.prepare_dirac(f, po);
    } else {
        const filter_spec c = parse_filter(s.filter);
        nf = noise.prepare_filtered(f, c, po);
        const bool summable = c.regime == filter_regime::summable;
        extra["filter"] = {{"spec", s.filter}, {"regime", to_string(c.regime)}, {"case", summable ? 1 : 2},
                           {"gain", filter_gain(c, s.h)}};
        if (summable) extra["filter"]["sum"] = c.sum();
    }
    replica_set rs = single_column(replicate(s.n, s.threads, [&](std::uint64_t r) { return nf.eval(G, r); }));
    write_text(s.out, rs.to_csv());
    if (s.report.empty()) return exit_ok;
    json body = extra;
    body["innovations"] = innovations_json(G);
    body["grid"] = {{"h", s.h}, {"dim", s.dim}, {"cells", nf.window.size()}, {"truncation", nf.truncation},
                    {"far_field_scale", nf.lump_scale}};
    body["stats"] = stats_json(rs.values);
    emit(s.report, sub, body);
    return exit_ok;
}

int run_shot(const settings& s, const CLI::App& sub, bool binomial) {
    const space_ptr E = parse_space(s.space);
    const kernel f = parse_kernel(s.kernel_expr, E->coord_dim());
    const space_fn g = as_space_fn(f);
    const innovation_sampler G = make_innovations(s, s.seed);
    std::string why;
    if (!check_shot_integrand(*E, g, G.limit().alpha, &why)) throw integrand_rejected(why);
    replica_set rs = single_column(replicate(s.n, s.threads, [&](std::uint64_t r) {
        return binomial ? binomial_noise_eval(*E, s.npoints, G, g, r) : shot_noise_eval(sample_poisson_cloud(*E, s.lambda, G, r), g);
    }));
    write_text(s.out, rs.to_csv());
    if (s.report.empty()) return exit_ok;
    json body;
    body["space"] = E->describe();
    body["marks"] = innovations_json(G);
    if (binomial) body["points"] = s.npoints;
    else body["lambda"] = s.lambda;
    body["limit"] = params_json(integral_params(*E, g, G.limit().alpha, G.limit().nu));
    body["stats"] = stats_json(rs.values);
    emit(s.report, sub, body);
    return exit_ok;
}

// ----------------------------------------------------------------- fractional

homogeneous_profile profile_of(const settings& s) {
    homogeneous_profile p;
    p.beta = s.beta;
    p.plus = s.plus;
    p.minus = s.minus;
    return p;
}

int run_fractional_params(const settings& s, const CLI::App& sub) {
    const kernel f = parse_kernel(s.kernel_expr, 1);
    const homogeneous_profile p = profile_of(s);
    const stable_params in(s.alpha, s.sigma, s.nu);
    const stable_params out = fractional_eval_params(f, p, in);
    json body = {{"params", params_json(out)}, {"self_similarity_exponent", 1.0 / s.alpha - s.beta + 1.0}};
    if (s.alpha == 2.0 && s.beta > 0.5 && f.support()) body["covariance_quadratic_form"] = covariance_quadratic_form(f, p);
    emit(s.report_to, sub, body);
    return exit_ok;
}

int run_regvar(const settings& s, const CLI::App& sub) {
    const filter_spec c = parse_filter(s.filter);
    if (c.regime != filter_regime::regularly_varying) throw config_error("regvar-check needs a power filter");
    const regvar_report r = regular_variation_check(c, c.profile);
    emit(s.report_to, sub, {{"t", r.t}, {"sup_error", r.sup_error}, {"pass", r.pass}});
    return study_exit(s, r.pass);
}

// ----------------------------------------------------------------- Levy motion

std::vector<std::vector<double>> table_rows(std::size_t n, std::size_t k, int threads,
                                            const std::function<std::vector<double>(std::uint64_t)>& f,
                                            replica_set& rs) {
    rs.columns = point_ids(k);
    rs.values.assign(n * k, 0.0);
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            const auto v = f(r);
            std::copy(v.begin(), v.end(), rs.values.begin() + static_cast<std::ptrdiff_t>(r * k));
        }
    });
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < k; ++j) cols.push_back(rs.column(j));
    return cols;
}

int run_levy_sphere(const settings& s, const CLI::App& sub) {
    const std::vector<sphere_point> pts = read_points(s.points_file);
    for (const auto& m : pts) {
        if (static_cast<int>(m.size()) != s.q + 1) throw config_error("sphere points need q + 1 coordinates");
        check_sphere_point(m);
    }
    const sphere_point O = s.origin.empty() ? north_pole(s.q) : parse_list(s.origin, "origin");
    if (static_cast<int>(O.size()) != s.q + 1) throw config_error("origin needs q + 1 coordinates");
    check_sphere_point(O);
    const innovation_sampler G = make_innovations(s, s.seed);
    replica_set rs;
    const auto cols = table_rows(s.n, pts.size(), s.threads, [&](std::uint64_t r) { return sphere_levy(pts, O, s.lambda, G, r); }, rs);
    write_text(s.out, rs.to_csv());
    if (s.report.empty()) return exit_ok;
    json table = json::array();
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const double d = geodesic_distance(O, pts[j]);
        const sample_stats st = describe(cols[j]);
        json row = {{"point", j}, {"coords", pts[j]}, {"distance", d}, {"variance", st.variance}, {"median_abs", median_abs(cols[j])}};
        if (d > 0.0) row["variance_over_distance"] = st.variance / d;
        table.push_back(row);
    }
    emit(s.report, sub, {{"origin", O}, {"lambda", s.lambda}, {"marks", innovations_json(G)}, {"table", table}});
    return exit_ok;
}

int run_levy_chentsov(const settings& s, const CLI::App& sub) {
    const auto pts = read_points(s.points_file);
    const int q = static_cast<int>(pts.front().size());
    const innovation_sampler G = make_innovations(s, s.seed);
    replica_set rs;
    const auto cols = table_rows(s.n, pts.size(), s.threads, [&](std::uint64_t r) { return chentsov_levy(pts, s.lambda, G, r); }, rs);
    write_text(s.out, rs.to_csv());
    if (s.report.empty()) return exit_ok;
    json table = json::array();
    for (std::size_t j = 0; j < pts.size(); ++j) {
        double norm = 0.0;
        for (double v : pts[j]) norm += v * v;
        norm = std::sqrt(norm);
        const sample_stats st = describe(cols[j]);
        json row = {{"point", j}, {"coords", pts[j]}, {"norm", norm}, {"variance", st.variance},
                    {"median_abs", median_abs(cols[j])}, {"mass", chentsov_mass(q, norm)}};
        if (norm > 0.0) row["variance_over_norm"] = st.variance / norm;
        table.push_back(row);
    }
    emit(s.report, sub, {{"q", q}, {"lambda", s.lambda}, {"marks", innovations_json(G)}, {"table", table}});
    return exit_ok;
}

// ----------------------------------------------------------------- studies

convergence_options study_options(const settings& s, const std::string& parameter) {
    convergence_options o;
    o.parameter = parameter;
    o.level = s.level;
    return o;
}

int run_grid_study(const settings& s, const CLI::App& sub) {
    const kernel f = parse_kernel(s.kernel_expr, s.dim);
    const std::vector<double> hs = parse_list(s.h_list, "h", true);
    const innovation_sampler G = make_innovations(s, s.seed);
    const stable_params target = integral_params(f, G.limit().alpha, G.limit().nu);
    const std::vector<double> ref = sample_stable(target, s.n, reference_seed(s.seed));
    prepare_options po;
    po.eps = s.eps;
    const auto sample = [&](double h) {
        grid_noise noise(grid_spec(s.dim, h), G);
        const noise_functional nf = noise.prepare(f, po);
        return replicate(s.n, s.threads, [&](std::uint64_t r) { return nf.eval(G, r); });
    };
    const convergence_report r =
        convergence_study(hs, sample, ref, [&](double t) { return stable_char_fn(t, target); }, study_options(s, "h"));
    json body = report_json(r);
    body["target"] = params_json(target);
    body["innovations"] = innovations_json(G);
    emit(s.report_to, sub, body);
    return study_exit(s, r.pass);
}

int run_shot_study(const settings& s, const CLI::App& sub) {
    const space_ptr E = parse_space(s.space);
    const kernel f = parse_kernel(s.kernel_expr, E->coord_dim());
    const space_fn g = as_space_fn(f);
    const std::vector<double> sched = parse_list(s.lambda_list, s.binomial ? "points" : "lambda", true);
    const innovation_sampler G = make_innovations(s, s.seed);
    std::string why;
    if (!check_shot_integrand(*E, g, G.limit().alpha, &why)) throw integrand_rejected(why);
    const stable_params target = integral_params(*E, g, G.limit().alpha, G.limit().nu);
    const std::vector<double> ref = sample_stable(target, s.n, reference_seed(s.seed));
    const auto sample = [&](double v) {
        if (s.binomial && (v < 1.0 || v != std::floor(v))) throw config_error("binomial schedule needs whole point counts");
        return replicate(s.n, s.threads, [&](std::uint64_t r) {
            return s.binomial ? binomial_noise_eval(*E, static_cast<std::size_t>(v), G, g, r)
                              : shot_noise_eval(sample_poisson_cloud(*E, v, G, r), g);
        });
    };
    const convergence_report r = convergence_study(sched, sample, ref, [&](double t) { return stable_char_fn(t, target); },
                                                   study_options(s, s.binomial ? "points" : "lambda"));
    json body = report_json(r);
    body["space"] = E->describe();
    body["target"] = params_json(target);
    body["marks"] = innovations_json(G);
    emit(s.report_to, sub, body);
    return study_exit(s, r.pass);
}

int run_filter_study(const settings& s, const CLI::App& sub) {
    const kernel f = parse_kernel(s.kernel_expr, 1);
    const filter_spec c = parse_filter(s.filter);
    const std::vector<double> hs = parse_list(s.h_list, "h", true);
    const innovation_sampler G = make_innovations(s, s.seed);
    const stable_params law = G.limit();
    const bool summable = c.regime == filter_regime::summable;
    std::vector<double> ref;
    stable_params target;
    if (summable) {
        const stable_params sf = integral_params(f, law.alpha, law.nu);
        const double C = c.sum();
        target = stable_params(law.alpha, std::abs(C) * sf.sigma, law.alpha == 1.0 ? 0.0 : (C < 0.0 ? -sf.nu : sf.nu));
        ref = sample_stable(target, s.n, reference_seed(s.seed));
    } else {
        target = fractional_eval_params(f, c.profile, law);
        ref = sample_fractional(f, c.profile, law, s.n, reference_seed(s.seed));
    }
    prepare_options po;
    po.eps = s.eps;
    const auto sample = [&](double h) {
        grid_noise noise(grid_spec(1, h), G);
        const noise_functional nf = noise.prepare_filtered(f, c, po);
        return replicate(s.n, s.threads, [&](std::uint64_t r) { return nf.eval(G, r); });
    };
    convergence_options o = study_options(s, "h");
    o.require_final_acceptance = summable;
    const convergence_report r = convergence_study(hs, sample, ref, [&](double t) { return stable_char_fn(t, target); }, o);
    json body = report_json(r);
    body["case"] = summable ? 1 : 2;
    body["target"] = params_json(target);
    body["innovations"] = innovations_json(G);
    emit(s.report_to, sub, body);
    return study_exit(s, r.pass);
}

int run_error_bound(const settings& s, const CLI::App& sub) {
    const kernel f = parse_kernel(s.kernel_expr, 1);
    const kernel fM = s.kernel_m.empty() ? f : parse_kernel(s.kernel_m, 1);
    const stable_params p(s.alpha, s.sigma, s.nu);
    json body;
    bool pass = true;
    if (s.coupled_n > 0) {
        const coupled_error_report r = coupled_error_study(f, fM, s.h, s.moment, p, s.coupled_n, s.seed, s.refine, s.threads);
        body = {{"bound", r.bound}, {"empirical", r.empirical}, {"std_error", r.std_error}, {"ratio", r.ratio},
                {"norm", r.norm}, {"n", r.n}};
        pass = std::abs(r.ratio - 1.0) <= s.tol;
        body["pass"] = pass;
    } else {
        grid_spec g(1, s.h);
        body = {{"bound", error_bound(f, fM, g, s.moment, p)}};
    }
    emit(s.report_to, sub, body);
    return study_exit(s, pass);
}

// ----------------------------------------------------------------- operator identities

int run_verify_operators(const settings& s, const CLI::App& sub) {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0), W(0.5, 3.0), C(0.25, 4.0), H(0.05, 0.5);
    std::uniform_int_distribution<int> dimd(1, 2), len(1, 12), off(-6, 6);
    const double hs[] = {0.05, 0.1, 0.25, 0.3, 0.5, 1.0};
    int exact = 0;
    double worst_norm = 0.0, worst_idem = 0.0, worst_scaling = 0.0;
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    for (int c = 0; c < s.cases; ++c) {
        const int d = dimd(rng);
        std::vector<std::int64_t> lo(d), hi(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = off(rng);
            hi[i] = lo[i] + len(rng);
        }
        const double h = hs[c % 6];
        index_window w(lo, hi);
        std::vector<double> vals(w.size());
        for (double& v : vals) v = U(rng);
        const cell_array u(h, w, vals);
        const cell_array back = psi_h(phi_h(u), grid_spec(h, w));
        bool same = back.size() == u.size();
        for (std::size_t i = 0; same && i < u.size(); ++i) same = back.values()[i] == u.values()[i];
        exact += same;
        const double a = 0.5 + 1.5 * (c % 7) / 6.0;
        worst_norm = std::max(worst_norm, rel(lp_pow(phi_h(u), a).value, std::pow(h, d) * u.lp_pow(a)));

        char expr[160];
        std::snprintf(expr, sizeof expr, "(%.6f + %.6f*x)*exp(-%.6f*x*x)", U(rng), U(rng), W(rng));
        const kernel f = parse_kernel(expr, 1);
        grid_spec g(1, 0.5 * h);
        g.window = g.cover(box({-6.0}, {6.0}));
        const cell_array once = psi_h(tilde_psi_h(f, g), g);
        const cell_array direct = psi_h(f, g);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < once.size(); ++i) {
            scale = std::max(scale, std::abs(direct.values()[i]));
            diff = std::max(diff, std::abs(once.values()[i] - direct.values()[i]));
        }
        worst_idem = std::max(worst_idem, diff / scale);

        grid_noise noise(grid_spec(1, H(rng)), innovation_sampler::exact(stable_params(a, 1.0, 0.0), s.seed + c));
        const auto [lhs, rhs] = scaling_transport(noise, f, C(rng), static_cast<std::uint64_t>(c));
        worst_scaling = std::max(worst_scaling, rel(lhs, rhs));
    }
    const bool ok_exact = exact == s.cases;
    const bool ok_norm = worst_norm <= 1e-12;
    const bool ok_idem = worst_idem <= 1e-10;
    const bool ok_scaling = worst_scaling <= 1e-10;
    const bool pass = ok_exact && ok_norm && ok_idem && ok_scaling;
    emit(s.report_to, sub,
         {{"cases", s.cases},
          {"psi_phi_exact", {{"count", exact}, {"pass", ok_exact}}},
          {"norm_identity", {{"worst", worst_norm}, {"tol", 1e-12}, {"pass", ok_norm}}},
          {"idempotence", {{"worst", worst_idem}, {"tol", 1e-10}, {"pass", ok_idem}}},
          {"scaling", {{"worst", worst_scaling}, {"tol", 1e-10}, {"pass", ok_scaling}}},
          {"pass", pass}});
    return pass ? exit_ok : exit_acceptance;
}

}  // namespace

std::map<std::string, runner> register_commands(CLI::App& app) {
    std::map<std::string, runner> run;
    // one settings block per subcommand, so defaults can differ between them
    std::map<std::string, std::shared_ptr<settings>> all;
    const auto add = [&](const char* name, const char* help) {
        auto* c = app.add_subcommand(name, help);
        all[name] = std::make_shared<settings>();
        return c;
    };
    const auto S = [&](CLI::App* c) -> settings& { return *all.at(c->get_name()); };
    const auto bind = [&](CLI::App* c, int (*fn)(const settings&, const CLI::App&)) {
        run[c->get_name()] = [st = all.at(c->get_name()), fn](const CLI::App& sub) { return fn(*st, sub); };
    };

    {
        auto* c = add("sample-stable", "draw i.i.d. S_alpha(sigma, nu) variates");
        add_law(c, S(c), false);
        add_replicas(c, S(c));
        add_csv_out(c, S(c));
        bind(c, run_sample_stable);
    }
    const auto grid_like = [&](const char* name, const char* help) {
        auto* c = add(name, help);
        add_law(c, S(c), true);
        add_kernel(c, S(c));
        c->add_option("--h", S(c).h, "lattice span")->check(CLI::PositiveNumber);
        c->add_option("--eps", S(c).eps, "truncation budget relative to ||f||^alpha");
        add_replicas(c, S(c));
        add_csv_out(c, S(c));
        return c;
    };
    bind(grid_like("grid-noise", "mu_h[f] replicas on the lattice"),
         [](const settings& st, const CLI::App& sub) { return run_grid(st, sub, grid_kind::plain); });
    bind(grid_like("dirac-noise", "Dirac variant: sum of xi_k f(hk)"),
         [](const settings& st, const CLI::App& sub) { return run_grid(st, sub, grid_kind::dirac); });
    {
        auto* c = grid_like("filter-noise", "filtered lattice noise (summable or power filter)");
        c->add_option("--filter", S(c).filter, "identity, geometric:r,K, power:beta,K[,c0[,minus]] or coeffs:...");
        bind(c, [](const settings& st, const CLI::App& sub) { return run_grid(st, sub, grid_kind::filtered); });
    }
    const auto shot_like = [&](const char* name, const char* help) {
        auto* c = add(name, help);
        add_law(c, S(c), true);
        c->add_option("--kernel", S(c).kernel_expr, "integrand on the space")->required();
        c->add_option("--space", S(c).space, "box(a,b,...) or sphere(q)");
        add_replicas(c, S(c));
        add_csv_out(c, S(c));
        return c;
    };
    {
        auto* c = shot_like("shot-noise", "Poisson shot noise replicas");
        c->add_option("--lambda", S(c).lambda, "intensity")->check(CLI::PositiveNumber);
        bind(c, [](const settings& st, const CLI::App& sub) { return run_shot(st, sub, false); });
    }
    {
        auto* c = shot_like("binomial-noise", "binomial (fixed point count) noise replicas");
        c->add_option("--points", S(c).npoints, "number of points")->check(CLI::PositiveNumber);
        bind(c, [](const settings& st, const CLI::App& sub) { return run_shot(st, sub, true); });
    }
    {
        auto* c = add("fractional-params", "law of the fractional limit (f * p) for d = 1");
        add_law(c, S(c), false);
        add_kernel(c, S(c), false);
        c->add_option("--beta", S(c).beta, "homogeneity order of the profile");
        c->add_option("--plus", S(c).plus, "profile weight on x > 0");
        c->add_option("--minus", S(c).minus, "profile weight on x < 0");
        add_report_out(c, S(c));
        bind(c, run_fractional_params);
    }
    {
        auto* c = add("regvar-check", "regular variation diagnostic of a power filter");
        c->add_option("--filter", S(c).filter, "power:beta,K[,c0[,minus]]")->required();
        add_report_out(c, S(c));
        add_verify(c, S(c));
        bind(c, run_regvar);
    }
    {
        auto* c = add("levy-sphere", "Levy motion on the sphere S^q");
        add_law(c, S(c), true);
        c->add_option("--q", S(c).q, "sphere dimension")->check(CLI::Range(1, 3));
        c->add_option("--lambda", S(c).lambda, "intensity")->check(CLI::PositiveNumber);
        c->add_option("--points", S(c).points_file, "CSV of unit vectors")->required()->check(CLI::ExistingFile);
        c->add_option("--origin", S(c).origin, "origin O as x,y,z (default north pole)");
        add_replicas(c, S(c));
        add_csv_out(c, S(c));
        bind(c, run_levy_sphere);
    }
    {
        auto* c = add("levy-chentsov", "Chentsov Levy field on R^q");
        add_law(c, S(c), true);
        c->add_option("--lambda", S(c).lambda, "intensity")->check(CLI::PositiveNumber);
        c->add_option("--points", S(c).points_file, "CSV of points in R^q")->required()->check(CLI::ExistingFile);
        add_replicas(c, S(c));
        add_csv_out(c, S(c));
        bind(c, run_levy_chentsov);
    }
    {
        auto* c = add("grid-study", "lattice convergence study over a span schedule");
        S(c).innovations = "auto";
        add_law(c, S(c), true);
        add_kernel(c, S(c));
        c->add_option("--h", S(c).h_list, "span schedule, e.g. 0.5,0.1,0.02");
        c->add_option("--eps", S(c).eps, "truncation budget relative to ||f||^alpha");
        c->add_option("--level", S(c).level, "test level");
        add_replicas(c, S(c));
        add_report_out(c, S(c));
        add_verify(c, S(c));
        bind(c, run_grid_study);
    }
    {
        auto* c = add("shot-study", "shot-noise convergence study over an intensity schedule");
        S(c).innovations = "auto";
        add_law(c, S(c), true);
        c->add_option("--kernel", S(c).kernel_expr, "integrand on the space")->required();
        c->add_option("--space", S(c).space, "box(a,b,...) or sphere(q)");
        c->add_option("--lambda", S(c).lambda_list, "intensity (or point count) schedule");
        c->add_flag("--binomial", S(c).binomial, "binomial noise; the schedule counts points");
        c->add_option("--level", S(c).level, "test level");
        add_replicas(c, S(c));
        add_report_out(c, S(c));
        add_verify(c, S(c));
        bind(c, run_shot_study);
    }
    {
        auto* c = add("filter-study", "filtered lattice noise against its limit, d = 1");
        S(c).innovations = "auto";
        add_law(c, S(c), true);
        add_kernel(c, S(c), false);
        c->add_option("--filter", S(c).filter, "geometric:r,K, power:beta,K[,c0[,minus]] or coeffs:...")->required();
        c->add_option("--h", S(c).h_list, "span schedule");
        c->add_option("--eps", S(c).eps, "truncation budget relative to ||f||^alpha");
        c->add_option("--level", S(c).level, "test level");
        add_replicas(c, S(c));
        add_report_out(c, S(c));
        add_verify(c, S(c));
        bind(c, run_filter_study);
    }
    {
        auto* c = add("error-bound", "moment error bound, optionally against a coupled simulation");
        add_law(c, S(c), false);
        add_kernel(c, S(c), false);
        c->add_option("--kernel-m", S(c).kernel_m, "approximating integrand f_M (default f)");
        c->add_option("--h", S(c).h, "lattice span")->check(CLI::PositiveNumber);
        c->add_option("--moment", S(c).moment, "moment order p < alpha")->check(CLI::PositiveNumber);
        c->add_option("--refine", S(c).refine, "fine cells per coarse cell")->check(CLI::Range(2, 1024));
        c->add_option("--tol", S(c).tol, "relative tolerance of the ratio under --verify");
        c->add_option("--n", S(c).coupled_n, "replicas of the coupled simulation (0: bound only)");
        c->add_option("--seed", S(c).seed, "random seed of the coupled simulation");
        c->add_option("--threads", S(c).threads, "worker threads (default: STABLENOISE_THREADS or 1)");
        add_report_out(c, S(c));
        add_verify(c, S(c));
        bind(c, run_error_bound);
    }
    {
        auto* c = add("verify-operators", "exact operator identities on random cases");
        c->add_option("--cases", S(c).cases, "number of random cases")->check(CLI::PositiveNumber);
        c->add_option("--seed", S(c).seed, "random seed")->required();
        add_report_out(c, S(c));
        bind(c, run_verify_operators);
    }
    return run;
}

}  // namespace stablenoise::cli
