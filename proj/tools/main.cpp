#include "cli_support.hpp"

#include "shintani/cmtraces.hpp"
#include "shintani/cycles.hpp"
#include "shintani/forms.hpp"
#include "shintani/hyperbolic.hpp"
#include "shintani/qforms.hpp"
#include "shintani/specfun.hpp"
#include "shintani/thetacore.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace shintani;
using cli::Json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

QForm parse_form(const std::vector<long long>& v) {
    if (v.size() != 3) throw UsageError("--form expects three integers a b c");
    return QForm{v[0], v[1], v[2]};
}

Complex parse_point(const std::vector<double>& v, const char* what) {
    if (v.size() != 2) throw UsageError(std::string(what) + " expects two numbers (real and imaginary part)");
    return Complex(Real(v[0]), Real(v[1]));
}

Json form_json(const QForm& q) { return Json::array({q.a, q.b, q.c}); }

// run `compute` unless the cache already holds the value for (op, params)
template <class F>
Json cached(const cli::ResultCache& cache, const std::string& op, const Json& params, F&& compute) {
    std::string warning;
    if (auto hit = cache.get(op, params, &warning)) return *hit;
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    Json value = compute();
    cache.put(op, params, value);
    return value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic-form classes, genus characters, CM traces, regularized cycle integrals and theta-lift checks"};
    app.require_subcommand(1);
    app.fallthrough();

    cli::Config cfg;
    app.add_option("--precision", cfg.precision_digits, "working precision in decimal digits (15-45)");
    app.add_option("--threads", cfg.threads, "worker threads");
    app.add_option("--cache-dir", cfg.cache_dir, "result cache directory (default: $SHINTANI_CACHE_DIR)");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tolerance", cfg.tolerance, "override per-identity tolerances");

    long long D_pos = 0;
    auto* c_classnum = app.add_subcommand("class-number", "Hurwitz class number H(D)");
    c_classnum->add_option("D", D_pos, "D >= 0")->required();

    long long disc = 0;
    auto* c_classes = app.add_subcommand("classes", "class representatives of a discriminant");
    c_classes->add_option("--disc", disc, "discriminant")->required();

    long long delta = 0, D = 0;
    std::vector<long long> form;
    auto* c_chi = app.add_subcommand("chi", "genus character chi_delta(Q)");
    c_chi->add_option("--delta", delta)->required();
    c_chi->add_option("--form", form, "a b c")->required()->expected(3);

    std::string fname = "J";
    auto* c_cm = app.add_subcommand("cm-trace", "twisted trace of CM values");
    c_cm->add_option("--delta", delta)->required();
    c_cm->add_option("--D", D, "negative D")->required();
    c_cm->add_option("--function", fname, "1 or J")->check(CLI::IsMember({"1", "J"}));

    int k = 0;
    double T = 2.0;
    auto* c_cycle = app.add_subcommand("cycle-trace", "twisted trace of cycle integrals of E2*");
    c_cycle->add_option("--delta", delta)->required();
    c_cycle->add_option("--D", D, "positive D")->required();
    c_cycle->add_option("--T", T, "truncation height for square discriminants");

    auto* c_lval = app.add_subcommand("l-value", "L*_delta(E2*, 1) via regularized cycle integrals");
    c_lval->add_option("--delta", delta)->required();

    int dmax = 20;
    int order = 128;
    auto* c_fser = app.add_subcommand("f-series", "generating series of twisted singular moduli");
    c_fser->add_option("--delta", delta)->required();
    c_fser->add_option("--dmax", dmax);
    c_fser->add_option("--order", order, "q-series order of J");

    auto* c_e32 = app.add_subcommand("e32", "holomorphic coefficients H(D) of the weight 3/2 Eisenstein series");
    c_e32->add_option("--dmax", dmax);

    std::string identity = "all";
    std::vector<long long> deltas, Ds;
    auto* c_verify = app.add_subcommand("verify", "identity suite");
    c_verify->add_option("--identity", identity, "identity id or 'all'");
    c_verify->add_option("--delta", deltas, "one or more delta")->required();
    c_verify->add_option("--D", Ds, "one or more D");

    std::vector<double> tau{0.0, 1.0}, z{0.3, 1.1};
    double step = 1e-3;
    auto* c_eta = app.add_subcommand("eta-check", "finite-difference check of the eta preimage");
    c_eta->add_option("--delta", delta)->required();
    c_eta->add_option("--k", k);
    c_eta->add_option("--form", form, "a b c")->required()->expected(3);
    c_eta->add_option("--tau", tau, "Re Im")->expected(2);
    c_eta->add_option("--z", z, "Re Im")->expected(2);
    c_eta->add_option("--step", step);

    int radius = 25;
    auto* c_theta = app.add_subcommand("theta", "truncated theta sum");
    c_theta->add_option("--delta", delta)->required();
    c_theta->add_option("--k", k);
    c_theta->add_option("--tau", tau, "Re Im")->expected(2);
    c_theta->add_option("--z", z, "Re Im")->expected(2);
    c_theta->add_option("--radius", radius);

    theta::LiftOptions lopt;
    auto* c_lift = app.add_subcommand("lift-coeff", "D-th lift coefficient of E2* by direct quadrature (slow)");
    c_lift->add_option("--delta", delta)->required();
    c_lift->add_option("--D", D)->required();
    c_lift->add_option("--grid", lopt.grid);
    c_lift->add_option("--T", lopt.T);
    c_lift->add_option("--v", lopt.v);
    c_lift->add_option("--radius", lopt.radius);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cfg.cache_dir.empty())
            if (const char* env = std::getenv("SHINTANI_CACHE_DIR")) cfg.cache_dir = env;
        cfg.validate();
        const Precision prec = cfg.precision();
        const cli::ResultCache cache(cfg.cache_dir);
        Json out;
        int code = 0;

        if (*c_classnum) {
            if (D_pos < 0) throw DomainError("D must be >= 0");
            out["D"] = D_pos;
            out["H"] = cli::to_json(qforms::hurwitz_class_number(D_pos));
        } else if (*c_classes) {
            auto cl = qforms::class_reps(disc);
            out["disc"] = disc;
            out["regime"] = cl.regime == qforms::Regime::definite ? "definite"
                            : cl.regime == qforms::Regime::square ? "square"
                                                                 : "indefinite";
            Json reps = Json::array();
            for (const auto& q : cl.reps) reps.push_back(form_json(q));
            out["reps"] = reps;
        } else if (*c_chi) {
            QForm q = parse_form(form);
            qforms::GenusOptions g;
            g.search_radius = prec.genus_search_radius;
            out["delta"] = delta;
            out["form"] = form_json(q);
            out["chi"] = qforms::genus_char(delta, q, g);
        } else if (*c_cm) {
            auto F = fname == "1" ? cmtraces::Evaluator([](const Complex&) { return Complex(1); })
                                  : cmtraces::j_evaluator(128);
            auto tr = cmtraces::trace_cm(F, delta, D, fname);
            out["delta"] = delta;
            out["D"] = D;
            out["function"] = fname;
            out["value"] = cli::to_json(tr.value);
            out["class_count"] = tr.class_count;
            out["stabilizer_weighted"] = tr.stabilizer_weighted;
        } else if (*c_cycle) {
            Json params{{"delta", delta}, {"D", D}, {"T", T}, {"precision", cfg.precision_digits}};
            out = cached(cache, "cycle-trace", params, [&] {
                cycles::TraceOptions o;
                o.threads = cfg.threads;
                o.T = Real(T);
                o.reg.precision = prec;
                auto G = forms::e2_star_data(60);
                auto tr = cycles::trace_cycle(G, delta, D, 0, o);
                Json j;
                j["delta"] = delta;
                j["D"] = D;
                j["value"] = cli::to_json(tr.value);
                j["class_count"] = tr.class_count;
                j["quadrature_error"] = to_double(tr.error);
                j["target_12HH"] = to_double(12 * to_real(qforms::hurwitz_class_number(delta < 0 ? -delta : delta)) *
                                             to_real(qforms::hurwitz_class_number(D)));
                return j;
            });
        } else if (*c_lval) {
            Json params{{"delta", delta}, {"precision", cfg.precision_digits}};
            out = cached(cache, "l-value", params, [&] {
                cycles::TraceOptions o;
                o.threads = cfg.threads;
                o.reg.precision = prec;
                auto L = cycles::l_star_value(forms::e2_star_data(60), delta, 0, o);
                const Real ad = Real(delta < 0 ? -delta : delta);
                const Real H = to_real(qforms::hurwitz_class_number(delta < 0 ? -delta : delta));
                Json j;
                j["delta"] = delta;
                j["L_star"] = cli::to_json(L.value);
                j["normalized"] = cli::to_json(L.value / (12 * sqrt(ad)));
                j["H_squared"] = to_double(H * H);
                j["exponential_sum"] = to_double(cycles::l_value_exponential_sum(delta, prec));
                return j;
            });
        } else if (*c_fser) {
            Json params{{"delta", delta}, {"dmax", dmax}, {"order", order}};
            out = cached(cache, "f-series", params, [&] {
                Json coeffs = Json::array();
                for (const auto& [n, c] : cmtraces::f_series(delta, dmax, order))
                    coeffs.push_back(Json{{"n", n}, {"coefficient", to_double(c)}});
                Json j;
                j["delta"] = delta;
                j["coefficients"] = coeffs;
                return j;
            });
        } else if (*c_e32) {
            if (dmax < 0) throw DomainError("--dmax must be >= 0");
            auto e = forms::e32_star_coeffs(dmax);
            Json coeffs = Json::array();
            for (const auto& [n, h] : e.holomorphic) coeffs.push_back(Json{{"D", n}, {"H", cli::to_json(h)}});
            out["coefficients"] = coeffs;
        } else if (*c_verify) {
            cmtraces::SuiteOptions so;
            so.threads = cfg.threads;
            so.tolerance_override = cfg.tolerance;
            std::vector<cmtraces::IdentityReport> reps;
            if (identity == "all") {
                reps = cmtraces::identity_suite(deltas, Ds, so);
            } else {
                const auto& ids = cmtraces::identity_ids();
                if (std::find(ids.begin(), ids.end(), identity) == ids.end())
                    throw UsageError("unknown identity '" + identity + "'");
                const bool needs_D = identity == "hecke" || identity == "square-trace";
                if (needs_D && Ds.empty()) throw UsageError("--D is required for identity " + identity);
                for (long long dl : deltas) {
                    if (needs_D)
                        for (long long d : Ds) reps.push_back(cmtraces::run_identity(identity, dl, d, so));
                    else
                        reps.push_back(cmtraces::run_identity(identity, dl, 0, so));
                }
            }
            Json arr = Json::array();
            for (const auto& r : reps) {
                Json j = cli::to_json(r);
                j["config"] = cfg.to_json();
                arr.push_back(j);
                if (!r.pass) code = 1;
            }
            std::cout << (cfg.format == "csv" ? cli::dump_csv(arr) : cli::dump_json(arr) + "\n");
            return code;
        } else if (*c_eta) {
            theta::ThetaContext ctx;
            ctx.delta = delta;
            ctx.k = k;
            ctx.tau = parse_point(tau, "--tau");
            ctx.validate();
            const QForm q = parse_form(form);
            const Complex zz = parse_point(z, "--z");
            auto lattice = [&](const Complex& w) { return theta::eta_lattice(ctx, q, w); };
            auto plain = [&](const Complex& w) { return theta::eta(ctx, q, w).value; };
            auto r = theta::fd_operators(plain, 2 * k + 2, zz, Real(step));
            auto rl = theta::fd_operators(lattice, 2 * k + 2, zz, Real(step));
            Complex xi_closed = theta::xi_eta_closed(ctx, q, zz), phi = theta::phi_sh0_lattice(ctx, q, zz);
            out["form"] = form_json(q);
            out["eta"] = cli::to_json(plain(zz));
            out["xi_fd"] = cli::to_json(r.xi);
            out["xi_closed"] = cli::to_json(xi_closed);
            out["xi_abs_error"] = to_double(abs(r.xi - xi_closed));
            out["laplace_fd"] = cli::to_json(rl.laplace);
            out["phi_lattice"] = cli::to_json(phi);
            out["laplace_abs_error"] = to_double(abs(rl.laplace - phi));
        } else if (*c_theta) {
            theta::ThetaContext ctx;
            ctx.delta = delta;
            ctx.k = k;
            ctx.tau = parse_point(tau, "--tau");
            ctx.truncation_radius = radius;
            ctx.threads = cfg.threads;
            auto s = theta::theta_truncated(ctx, parse_point(z, "--z"), cfg.tolerance > 0 ? cfg.tolerance : 1e-10);
            out["value"] = cli::to_json(s.value);
            out["tail_bound"] = to_double(s.tail_bound);
            out["radius"] = s.radius;
            out["terms"] = s.terms;
            out["tail_ok"] = s.tail_ok;
            out["recommendation"] = s.recommendation;
        } else if (*c_lift) {
            lopt.threads = cfg.threads;
            Json params{{"delta", delta}, {"D", D}, {"grid", lopt.grid}, {"T", lopt.T}, {"v", lopt.v}, {"radius", lopt.radius}};
            out = cached(cache, "lift-coeff", params, [&] {
                auto r = theta::lift_coefficient_quadrature(delta, D, lopt);
                Json j;
                j["delta"] = delta;
                j["D"] = D;
                j["value"] = r.value;
                j["imag"] = r.imag;
                j["error_estimate"] = r.error_estimate;
                j["forms"] = r.forms;
                j["T"] = r.T;
                return j;
            });
        }
        out["config"] = cfg.to_json();
        std::cout << (cfg.format == "csv" ? cli::dump_csv(out) : cli::dump_json(out) + "\n");
        return code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
