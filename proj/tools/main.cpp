// Command-line driver: computes the backflow constant by matrix-free power
// iteration, runs the grid-refinement extrapolation, and emits the
// post-processing data sets (eigenvector, density/current fields, flow
// lines, cumulative norms). Data goes to files; progress goes to stderr.

#include "backflow/archive.hpp"
#include "backflow/dynamics.hpp"
#include "backflow/grid.hpp"
#include "backflow/kernel.hpp"
#include "backflow/operators.hpp"
#include "backflow/quadrature.hpp"
#include "backflow/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace bf = backflow;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

std::string csv_path_for(const std::string& out, const std::string& suffix = "") {
    std::filesystem::path p(out);
    std::string stem = (p.parent_path() / p.stem()).string();
    return stem + suffix + ".csv";
}

bf::StateVector starting_vector(const bf::RunConfig& cfg,
                                std::shared_ptr<const bf::MomentumGrid> grid) {
    if (cfg.start == "constant") return bf::constant_state(grid);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.1, 1.0);  // non-orthogonal to the maximizer
    bf::StateVector v = bf::make_state(grid);
    for (auto& a : v.amplitudes) a = u(rng);
    return v;
}

bf::PowerResult base_power_run(const bf::RunConfig& cfg) {
    auto grid = std::make_shared<const bf::MomentumGrid>(bf::make_grid(cfg.n0, cfg.q0));
    bf::BackflowOperator op(grid, cfg.T, cfg.route_enum());
    std::fprintf(stderr, "power iteration: n_half=%zu q=%g T=%g route=%s iterations=%zu\n",
                 cfg.n0, cfg.q0, cfg.T, cfg.route.c_str(), cfg.iterations);
    return bf::power_iterate([&](const bf::StateVector& v) { return op.apply_shifted(v); },
                             starting_vector(cfg, grid), cfg.iterations);
}

// Dynamics commands accept --resume <archive> to reuse a previously
// computed maximizing vector instead of re-running the power method.
bf::StateVector maximizing_vector(const bf::RunConfig& cfg, const std::string& resume) {
    if (!resume.empty()) {
        bf::ResultArchive a = bf::load_archive(resume);
        if (!a.payload.contains("final_vector"))
            throw std::runtime_error("resume archive has no final_vector payload: " + resume);
        std::fprintf(stderr, "loaded maximizing vector from %s\n", resume.c_str());
        return bf::state_from_json(a.payload.at("final_vector"));
    }
    return base_power_run(cfg).final_vector;
}

int cmd_lambda(const bf::RunConfig& cfg, const std::string& out) {
    bf::PowerResult r = base_power_run(cfg);
    bf::ResultArchive a{cfg, bf::power_result_to_json(r)};
    bf::save_archive(a, out);

    std::vector<std::vector<double>> rows(r.iterations);
    for (std::size_t i = 0; i < r.iterations; ++i)
        rows[i] = {static_cast<double>(i + 1), r.estimates[i], r.residuals[i]};
    bf::write_csv(csv_path_for(out), cfg, {"iteration", "lambda_estimate", "residual"}, rows);

    std::printf("lambda = %s\n", bf::format_double(r.lambda()).c_str());
    std::printf("final residual = %s\n", bf::format_double(r.residuals.back()).c_str());
    std::printf("archive: %s\n", out.c_str());
    return 0;
}

int cmd_extrapolate(const bf::RunConfig& cfg, const std::string& out, const std::string& resume) {
    std::vector<int> h_list;
    for (int h = 1; h <= cfg.h_max; ++h) h_list.push_back(h);

    std::vector<bf::HPoint> completed;
    if (!resume.empty()) {
        bf::ResultArchive prev = bf::load_archive(resume);
        completed = bf::h_points_from_json(prev.payload.at("points"));
        std::fprintf(stderr, "resuming: %zu of %zu h-points already done\n", completed.size(),
                     h_list.size());
    }

    bf::HProtocolOptions opts;
    opts.n0 = cfg.n0;
    opts.q0 = cfg.q0;
    opts.n_iter = cfg.iterations;
    opts.route = cfg.route_enum();
    opts.workers = cfg.workers;
    std::vector<bf::HPoint> done = completed;
    opts.on_point = [&](const bf::HPoint& p) {
        std::fprintf(stderr, "h=%d lambda_h=%s\n", p.h, bf::format_double(p.lambda_h).c_str());
        done.push_back(p);
        std::sort(done.begin(), done.end(),
                  [](const bf::HPoint& a, const bf::HPoint& b) { return a.h < b.h; });
        bf::Json checkpoint;
        checkpoint["points"] = bf::h_points_to_json(done);
        checkpoint["complete"] = done.size() == h_list.size();
        bf::save_archive({cfg, checkpoint}, out);  // per-h checkpoint; resumable
    };
    std::vector<bf::HPoint> points = bf::run_h_protocol(h_list, opts, completed);

    bf::SqrtFit sf = bf::fit_sqrt(points);
    bf::CubicFit cf = bf::fit_cubic(points);

    bf::Json payload;
    payload["points"] = bf::h_points_to_json(points);
    payload["complete"] = true;
    payload["sqrt_fit"] = {{"lambda_inf", sf.lambda_inf}, {"b", sf.b}, {"rms", sf.rms}};
    payload["cubic_fit"] = {{"c0", cf.c0}, {"c1", cf.c1}, {"c2", cf.c2},
                            {"c3", cf.c3}, {"rms", cf.rms}};
    payload["lambda_inf"] = cf.lambda_inf();
    bf::save_archive({cfg, payload}, out);

    std::vector<std::vector<double>> rows;
    for (const auto& p : points) {
        const double s = 1.0 / std::sqrt(static_cast<double>(p.h));
        const double sqrt_model = sf.lambda_inf + sf.b * s;
        const double cubic_model = cf.c0 + s * (cf.c1 + s * (cf.c2 + s * cf.c3));
        rows.push_back({static_cast<double>(p.h), s, p.lambda_h, sqrt_model, cubic_model});
    }
    bf::write_csv(csv_path_for(out), cfg, {"h", "s", "lambda_h", "sqrt_fit", "cubic_fit"}, rows);

    std::printf("lambda_inf (cubic intercept) = %s\n", bf::format_double(cf.c0).c_str());
    std::printf("lambda_inf (sqrt fit)        = %s\n", bf::format_double(sf.lambda_inf).c_str());
    std::printf("rms: cubic %s, sqrt %s\n", bf::format_double(cf.rms).c_str(),
                bf::format_double(sf.rms).c_str());
    std::printf("archive: %s\n", out.c_str());
    return 0;
}

int cmd_eigenvector(const bf::RunConfig& cfg, const std::string& out, const std::string& resume) {
    bf::StateVector v = maximizing_vector(cfg, resume);
    const bf::MomentumGrid& g = *v.grid;

    bf::Evolution ev(v);
    const bf::MomentumGrid& pg = ev.grid();  // oversampled position grid
    bf::ComplexVec psi0 = ev.psi(0.0);

    // Parity diagnostics of psi_0: even real part, odd imaginary part.
    double even_res = 0.0, odd_res = 0.0, norm_sq = 0.0;
    for (std::size_t n = 0; n < pg.n_full; ++n) {
        const std::size_t mirror = 2 * pg.n_half - 1 - n;
        const double re_a = psi0[n].real(), re_b = psi0[mirror].real();
        const double im_a = psi0[n].imag(), im_b = psi0[mirror].imag();
        even_res += (re_a - re_b) * (re_a - re_b);
        odd_res += (im_a + im_b) * (im_a + im_b);
        norm_sq += std::norm(psi0[n]);
    }
    const double even_rel = std::sqrt(even_res / norm_sq);
    const double odd_rel = std::sqrt(odd_res / norm_sq);

    bf::Json payload;
    payload["final_vector"] = bf::state_to_json(v);
    payload["parity_residual_even_real"] = even_rel;
    payload["parity_residual_odd_imag"] = odd_rel;
    bf::save_archive({cfg, payload}, out);

    std::vector<std::vector<double>> krows(g.n_half);
    for (std::size_t j = 0; j < g.n_half; ++j)
        krows[j] = {g.k_values[j], v.amplitudes[j].real(), v.amplitudes[j].imag()};
    bf::write_csv(csv_path_for(out, "_momentum"), cfg, {"k", "re", "im"}, krows);

    std::vector<std::vector<double>> xrows(pg.n_full);
    for (std::size_t n = 0; n < pg.n_full; ++n)
        xrows[n] = {pg.x_value(n), psi0[n].real(), psi0[n].imag()};
    bf::write_csv(csv_path_for(out, "_position"), cfg, {"x", "re", "im"}, xrows);

    std::printf("parity residuals: even-real %s, odd-imag %s\n",
                bf::format_double(even_rel).c_str(), bf::format_double(odd_rel).c_str());
    std::printf("archive: %s\n", out.c_str());
    return 0;
}

std::vector<double> time_slices(const bf::RunConfig& cfg) {
    std::vector<double> t;
    const int n = static_cast<int>(std::llround((cfg.t_max - cfg.t_min) / cfg.field_t_step));
    for (int i = 0; i <= n; ++i) t.push_back(cfg.t_min + cfg.field_t_step * i);
    return t;
}

int cmd_evolve(const bf::RunConfig& cfg, const std::string& out, const std::string& resume) {
    bf::StateVector v = maximizing_vector(cfg, resume);
    bf::Evolution ev(v);
    bf::SpacetimeField field = bf::build_field(ev, time_slices(cfg), cfg.x_min, cfg.x_max);

    bf::Json payload;
    payload["t_values"] = field.t_values;
    payload["x_values"] = field.x_values;
    payload["rho"] = field.rho;
    payload["j"] = field.j;
    payload["window_mass"] = field.window_mass;
    payload["final_vector"] = bf::state_to_json(v);
    bf::save_archive({cfg, payload}, out);

    std::vector<std::vector<double>> rows;
    rows.reserve(field.t_values.size() * field.x_values.size());
    for (std::size_t it = 0; it < field.t_values.size(); ++it)
        for (std::size_t ix = 0; ix < field.x_values.size(); ++ix)
            rows.push_back({field.t_values[it], field.x_values[ix], field.rho[it][ix],
                            field.j[it][ix]});
    bf::write_csv(csv_path_for(out), cfg, {"t", "x", "rho", "j"}, rows);

    double min_mass = 1.0;
    for (double m : field.window_mass) min_mass = std::min(min_mass, m);
    std::printf("slices: %zu, window mass >= %s\n", field.t_values.size(),
                bf::format_double(min_mass).c_str());
    std::printf("archive: %s\n", out.c_str());
    return 0;
}

int cmd_current(const bf::RunConfig& cfg, const std::string& out, const std::string& resume) {
    bf::StateVector v = maximizing_vector(cfg, resume);
    bf::Evolution ev(v);
    bf::BackflowFunctionalResult fr =
        bf::backflow_functional(ev, cfg.t_min, cfg.t_max, cfg.t_step);
    std::vector<double> j0(fr.t_values.size());
    for (std::size_t i = 0; i < fr.t_values.size(); ++i)
        j0[i] = ev.current_at_zero(fr.t_values[i]);

    bf::Json payload;
    payload["t_values"] = fr.t_values;
    payload["j_at_zero"] = j0;
    payload["half_space_probability"] = fr.p_values;
    payload["lambda_phi"] = fr.lambda_phi;
    payload["argmax_s"] = fr.s;
    payload["argmax_t"] = fr.t;
    payload["final_vector"] = bf::state_to_json(v);
    bf::save_archive({cfg, payload}, out);

    std::vector<std::vector<double>> rows(fr.t_values.size());
    for (std::size_t i = 0; i < fr.t_values.size(); ++i)
        rows[i] = {fr.t_values[i], j0[i], fr.p_values[i]};
    bf::write_csv(csv_path_for(out), cfg, {"t", "j_at_zero", "half_space_probability"}, rows);

    std::printf("lambda(phi) = %s at (s, t) = (%s, %s)\n",
                bf::format_double(fr.lambda_phi).c_str(), bf::format_double(fr.s).c_str(),
                bf::format_double(fr.t).c_str());
    std::printf("archive: %s\n", out.c_str());
    return 0;
}

int cmd_flowlines(const bf::RunConfig& cfg, const std::string& out, const std::string& resume) {
    bf::StateVector v = maximizing_vector(cfg, resume);
    bf::Evolution ev(v);
    bf::SpacetimeField field = bf::build_field(ev, time_slices(cfg), cfg.x_min, cfg.x_max);

    bf::FlowLineOptions fopts;
    fopts.dt = cfg.dt;
    fopts.probability_spacing = cfg.prob_spacing;
    std::vector<bf::FlowLine> lines = bf::flow_lines(field, fopts);

    bf::Json payload;
    payload["lines"] = bf::Json::array();
    for (const auto& l : lines) {
        bf::Json jl;
        jl["seed_quantile"] = l.seed_quantile;
        jl["terminated_early"] = l.terminated_early;
        jl["t"] = l.t;
        jl["x"] = l.x;
        payload["lines"].push_back(std::move(jl));
    }
    payload["final_vector"] = bf::state_to_json(v);
    bf::save_archive({cfg, payload}, out);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t s = 0; s < lines[i].t.size(); ++s)
            rows.push_back({static_cast<double>(i), lines[i].seed_quantile, lines[i].t[s],
                            lines[i].x[s]});
    bf::write_csv(csv_path_for(out), cfg, {"line", "seed_quantile", "t", "x"}, rows);

    std::printf("flow lines: %zu (spacing %s)\n", lines.size(),
                bf::format_double(cfg.prob_spacing).c_str());
    std::printf("archive: %s\n", out.c_str());
    return 0;
}

int cmd_normconv(const bf::RunConfig& cfg, const std::string& out, const std::string& resume) {
    bf::StateVector v = maximizing_vector(cfg, resume);
    const bf::MomentumGrid& g = *v.grid;

    std::vector<double> cum_v = bf::cumulative_norm(v);
    std::vector<double> cum_ref = bf::reference_cumulative(g.k_values, g.dk);

    const double n_direct = bf::norm_constant_sq_direct();
    const double n_subst = bf::norm_constant_sq_substituted();
    const double ref_deficit = 1.0 - cum_ref.back();

    bf::Json payload;
    payload["k_values"] = g.k_values;
    payload["cumulative_state"] = cum_v;
    payload["cumulative_reference"] = cum_ref;
    payload["norm_constant_sq_direct"] = n_direct;
    payload["norm_constant_sq_substituted"] = n_subst;
    payload["reference_truncation_deficit"] = ref_deficit;
    payload["final_vector"] = bf::state_to_json(v);
    bf::save_archive({cfg, payload}, out);

    std::vector<std::vector<double>> rows(g.n_half);
    for (std::size_t j = 0; j < g.n_half; ++j)
        rows[j] = {g.k_values[j], cum_v[j], cum_ref[j]};
    bf::write_csv(csv_path_for(out), cfg, {"k", "cumulative_state", "cumulative_reference"},
                  rows);

    std::printf("norm constant squared: direct %s, substituted %s (diff %s)\n",
                bf::format_double(n_direct).c_str(), bf::format_double(n_subst).c_str(),
                bf::format_double(std::abs(n_direct - n_subst)).c_str());
    std::printf("reference truncation deficit at q=%s: %s\n",
                bf::format_double(g.q_max).c_str(), bf::format_double(ref_deficit).c_str());
    std::printf("archive: %s\n", out.c_str());
    return 0;
}

// Oracle-equivalence and invariant suites; prints one line per check.
int cmd_verify(const bf::RunConfig& cfg) {
    int failures = 0;
    auto check = [&](const char* name, bool ok, double measured, double tol) {
        std::printf("%-44s %s  measured %.3e  tolerance %.1e\n", name, ok ? "PASS" : "FAIL",
                    measured, tol);
        if (!ok) ++failures;
    };

    std::mt19937_64 rng(cfg.seed ? cfg.seed : 12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto grid = std::make_shared<const bf::MomentumGrid>(bf::make_grid(512, 20.0));
    auto random_state = [&] {
        bf::StateVector s = bf::make_state(grid);
        for (auto& a : s.amplitudes) a = bf::Complex{u(rng), u(rng)};
        return s;
    };
    bf::BackflowOperator sandwich(grid, 1.0, bf::Route::projection_sandwich);
    bf::BackflowOperator hilbert(grid, 1.0, bf::Route::hilbert_route);

    // Route agreement on random vectors.
    double route_err = 0.0;
    for (int i = 0; i < 20; ++i) {
        bf::StateVector s = random_state();
        bf::StateVector a = sandwich.apply_backflow(s);
        bf::StateVector b = hilbert.apply_backflow(s);
        double diff = 0.0, ref = 0.0;
        for (std::size_t j = 0; j < a.amplitudes.size(); ++j) {
            diff += std::norm(a.amplitudes[j] - b.amplitudes[j]);
            ref += std::norm(a.amplitudes[j]);
        }
        route_err = std::max(route_err, std::sqrt(diff / ref));
    }
    check("route agreement (sandwich vs hilbert)", route_err < 1e-10, route_err, 1e-10);

    // Self-adjointness of Pi B Pi.
    double sa_err = 0.0;
    for (int i = 0; i < 20; ++i) {
        bf::StateVector x = random_state(), y = random_state();
        const bf::Complex lhs = bf::inner(sandwich.apply_backflow(x), y);
        const bf::Complex rhs = bf::inner(x, sandwich.apply_backflow(y));
        sa_err = std::max(sa_err, std::abs(lhs - rhs) / (x.norm() * y.norm()));
    }
    check("self-adjointness <Av,w> = <v,Aw>", sa_err < 1e-11, sa_err, 1e-11);

    // H^2 = -id and projection idempotence on the full line.
    bf::ComplexVec f(grid->n_full);
    for (auto& a : f) a = bf::Complex{u(rng), u(rng)};
    bf::ComplexVec hh = sandwich.apply_hilbert(sandwich.apply_hilbert(f));
    double h2_err = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) h2_err += std::norm(hh[m] + f[m]);
    h2_err = std::sqrt(h2_err) / bf::full_norm(f, *grid);
    check("Hilbert transform H^2 = -id", h2_err < 1e-12, h2_err, 1e-12);

    bf::ComplexVec p1 = sandwich.apply_position_projection(f);
    bf::ComplexVec p2 = sandwich.apply_position_projection(p1);
    double idual = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) idual += std::norm(p2[m] - p1[m]);
    idual = std::sqrt(idual) / bf::full_norm(f, *grid);
    check("position projection idempotent", idual < 1e-12, idual, 1e-12);

    // Rayleigh quotients inside [-1, 1].
    double worst_rq = 0.0;
    for (int i = 0; i < 20; ++i) {
        bf::StateVector s = random_state();
        const double rq =
            bf::inner(sandwich.apply_backflow(s), s).real() / (s.norm() * s.norm());
        worst_rq = std::max(worst_rq, std::abs(rq));
    }
    check("Rayleigh quotients in [-1,1]", worst_rq <= 1.0 + 1e-10, worst_rq, 1.0 + 1e-10);

    // Dilation / T covariance (Proposition check at T=1 vs T=4).
    bf::BackflowOperator op_t4(
        std::make_shared<const bf::MomentumGrid>(bf::make_grid(512, 10.0)), 4.0,
        bf::Route::projection_sandwich);
    double cov_err = 0.0;
    for (int i = 0; i < 5; ++i) {
        bf::StateVector s = random_state();
        const double e1 = bf::inner(sandwich.apply_backflow(s), s).real();
        bf::StateVector d = bf::apply_dilation(s, 2.0);
        const double e2 = bf::inner(op_t4.apply_backflow(d), d).real();
        cov_err = std::max(cov_err, std::abs(e1 - e2));
    }
    check("dilation/T covariance (T=1 vs T=4)", cov_err < 1e-8, cov_err, 1e-8);

    // Dense kernel vs matrix-free power iteration.
    {
        auto g2 = std::make_shared<const bf::MomentumGrid>(bf::make_grid(2000, 50.0));
        std::fprintf(stderr, "dense vs matrix-free cross-check at n_half=2000, q=50...\n");
        bf::DenseKernel K = bf::build_dense(g2);
        bf::PowerResult dense = bf::power_iterate(
            [&](const bf::StateVector& s) { return bf::apply_dense_shifted(K, s); },
            bf::constant_state(g2), 600);
        bf::BackflowOperator mf(g2, 1.0, cfg.route_enum());
        bf::PowerResult free_r = bf::power_iterate(
            [&](const bf::StateVector& s) { return mf.apply_shifted(s); },
            bf::constant_state(g2), 600);
        const double gap = std::abs(dense.lambda() - free_r.lambda());
        check("dense vs matrix-free lambda", gap < 2e-3, gap, 2e-3);
    }

    // Continuity equation |dP/dt - j(t,0)| at a few times.
    {
        bf::StateVector s = bf::gaussian_state(grid, 4.0, 1.0);
        bf::Evolution ev(s);
        const double maxj = [&] {
            double m = 0.0;
            for (double x : ev.current(0.7)) m = std::max(m, std::abs(x));
            return m;
        }();
        double cont = 0.0;
        for (double t : {-0.5, 0.0, 0.7}) {
            const double h = 1e-3;
            const double dpdt =
                (ev.half_space_probability(t + h) - ev.half_space_probability(t - h)) / (2 * h);
            cont = std::max(cont, std::abs(dpdt - ev.current_at_zero(t)));
        }
        check("continuity |dP/dt - j(t,0)|", cont < 1e-3 * maxj, cont, 1e-3 * maxj);
    }

    // Dollard trend: expectation decreasing toward -1.
    {
        auto g3 = std::make_shared<const bf::MomentumGrid>(bf::make_grid(4096, 20.0));
        std::fprintf(stderr, "Dollard probe T in {1,4,16,64}...\n");
        std::vector<bf::DollardSample> table =
            bf::dollard_probe(g3, {1.0}, {1.0, 4.0, 16.0, 64.0}, 5.0);
        bool monotone = true;
        for (std::size_t i = 1; i < table.size(); ++i)
            monotone = monotone && table[i].expectation < table[i - 1].expectation;
        const double last = table.back().expectation;
        check("Dollard trend decreasing, final < -0.9", monotone && last < -0.9, last, -0.9);
    }

    if (failures > 0) {
        std::printf("verification: %d check(s) FAILED\n", failures);
        return kExitVerification;
    }
    std::printf("verification: all checks passed\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backflow constant: matrix-free spectral computation and post-processing"};
    app.require_subcommand(1);

    bf::RunConfig cfg;
    std::string out;
    std::string resume;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n0", cfg.n0, "half-line grid points at h=1");
        sub->add_option("--q0", cfg.q0, "momentum cutoff at h=1");
        sub->add_option("--h-max", cfg.h_max, "largest refinement factor h");
        sub->add_option("--iterations", cfg.iterations, "power-method iterations");
        sub->add_option("--T", cfg.T, "backflow time parameter");
        sub->add_option("--route", cfg.route, "operator route: sandwich|hilbert");
        sub->add_option("--start", cfg.start, "starting vector: constant|random");
        sub->add_option("--seed", cfg.seed, "seed for random starts");
        sub->add_option("--t-min", cfg.t_min, "time window lower edge");
        sub->add_option("--t-max", cfg.t_max, "time window upper edge");
        sub->add_option("--x-min", cfg.x_min, "position window lower edge");
        sub->add_option("--x-max", cfg.x_max, "position window upper edge");
        sub->add_option("--dt", cfg.dt, "flow-line integrator step");
        sub->add_option("--t-step", cfg.t_step, "P(t) curve resolution");
        sub->add_option("--field-t-step", cfg.field_t_step, "spacetime-field slice spacing");
        sub->add_option("--prob-spacing", cfg.prob_spacing, "mass between adjacent flow lines");
        sub->add_option("--workers", cfg.workers, "worker threads for h-protocol");
        sub->add_option("--out", out, "output archive path (.json; a .csv is written too)");
        sub->add_option("--resume", resume, "archive to resume/reuse");
        return sub;
    };

    CLI::App* c_lambda = add_common(app.add_subcommand("lambda", "single-grid power iteration"));
    CLI::App* c_extrap =
        add_common(app.add_subcommand("extrapolate", "h-protocol with both fits"));
    CLI::App* c_eig =
        add_common(app.add_subcommand("eigenvector", "maximizing vector representations"));
    CLI::App* c_evolve = add_common(app.add_subcommand("evolve", "density/current field"));
    CLI::App* c_current =
        add_common(app.add_subcommand("current", "j(t,0), P(t), backflow functional"));
    CLI::App* c_flow = add_common(app.add_subcommand("flowlines", "Bohmian flow lines"));
    CLI::App* c_norm = add_common(app.add_subcommand("normconv", "cumulative norm curves"));
    CLI::App* c_verify =
        add_common(app.add_subcommand("verify", "oracle-equivalence and invariant suites"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (out.empty()) out = cfg.command + ".json";

    try {
        cfg.validate();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return kExitUsage;
    }

    try {
        if (sub == c_lambda) return cmd_lambda(cfg, out);
        if (sub == c_extrap) return cmd_extrapolate(cfg, out, resume);
        if (sub == c_eig) return cmd_eigenvector(cfg, out, resume);
        if (sub == c_evolve) return cmd_evolve(cfg, out, resume);
        if (sub == c_current) return cmd_current(cfg, out, resume);
        if (sub == c_flow) return cmd_flowlines(cfg, out, resume);
        if (sub == c_norm) return cmd_normconv(cfg, out, resume);
        if (sub == c_verify) return cmd_verify(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitUsage;
}
