#include "shintani/cmtraces.hpp"

#include "shintani/cycles.hpp"
#include "shintani/hyperbolic.hpp"
#include "shintani/specfun.hpp"

#include <chrono>

namespace shintani::cmtraces {

TraceResult trace_cm(const Evaluator& F, long long delta, long long D, const std::string& f_name) {
    if (!specfun::is_fundamental_discriminant(delta)) throw DomainError("trace_cm: delta must be a fundamental discriminant");
    if (D >= 0) throw DomainError("trace_cm: D must be negative (indefinite combination)");
    TraceResult out;
    out.delta = delta;
    out.D = D;
    out.f_name = f_name;
    const long long sD = delta > 0 ? D : -D;
    const long long m = ((sD % 4) + 4) % 4;
    if (m != 0 && m != 1) throw DomainError("trace_cm requires sgn(delta) D = 0, 1 mod 4");
    const long long disc = -(delta < 0 ? -delta : delta) * (-D);
    for (const auto& Q : qforms::class_reps(disc).reps) {
        ++out.class_count;
        int chi = qforms::genus_char(delta, Q);
        if (chi == 0) continue;
        Complex z = hyperbolic::cm_point(Q).z;
        out.value += Real(chi) * F(z) / Real(qforms::stabilizer_order(Q));
    }
    return out;
}

Evaluator j_evaluator(int order) {
    return [order](const Complex& z) { return forms::eval_J(z, order).value; };
}

std::map<int, Complex> f_series_complex(long long delta, int D_max, int j_order) {
    if (delta >= 0 || !specfun::is_fundamental_discriminant(delta))
        throw DomainError("f_series: delta must be a negative fundamental discriminant");
    std::map<int, Complex> out;
    out[static_cast<int>(delta)] = Complex(1);
    auto J = j_evaluator(j_order);
    for (int n = 1; n <= D_max; ++n) {
        // -delta n must be 0, 1 mod 4 with delta < 0
        if (n % 4 == 2 || n % 4 == 3) continue;
        out[n] = trace_cm(J, delta, -n, "J").value / sqrt(Real(n));
    }
    return out;
}

std::map<int, Real> f_series(long long delta, int D_max, int j_order) {
    std::map<int, Real> out;
    for (const auto& [n, c] : f_series_complex(delta, D_max, j_order)) {
        if (abs(c.imag()) > Real("1e-8"))
            throw std::runtime_error("f_series: coefficient " + std::to_string(n) + " is not real");
        out[n] = c.real();
    }
    return out;
}

namespace {

const forms::HarmonicFourierData& e2() {
    static const auto G = forms::e2_star_data(60);
    return G;
}

Real class_number(long long n) { return to_real(qforms::hurwitz_class_number(n < 0 ? -n : n)); }

double default_tolerance(const std::string& id) {
    if (id == "hecke" || id == "l-value") return 1e-5;
    if (id == "sigma") return 1e-8;
    return 1e-10;
}

}  // namespace

const std::vector<std::string>& identity_ids() {
    static const std::vector<std::string> ids{"class-number", "sigma", "l-value", "hecke", "square-trace"};
    return ids;
}

IdentityReport run_identity(const std::string& id, long long delta, long long D, const SuiteOptions& opt) {
    IdentityReport rep;
    rep.identity_id = id;
    rep.params["delta"] = std::to_string(delta);
    rep.tolerance = opt.tolerance_override > 0 ? opt.tolerance_override : default_tolerance(id);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (delta >= 0 || !specfun::is_fundamental_discriminant(delta))
            throw DomainError("identity suite requires a negative fundamental discriminant");
        const Real ad = Real(-delta);
        cycles::TraceOptions topt;
        topt.threads = opt.threads;
        if (id == "class-number") {
            // both sides of L(0) = sqrt|delta| L(1) / pi = H(|delta|); report the worse one
            rep.target = class_number(delta);
            Real l0 = to_real(specfun::dirichlet_L_nonpositive(delta, 0));
            Real l1 = sqrt(ad) * specfun::dirichlet_L(delta, 1).value / pi();
            Real e0 = abs(l0 - rep.target), e1 = abs(l1 - rep.target);
            rep.computed = Complex(e0 >= e1 ? l0 : l1);
        } else if (id == "sigma") {
            Real H = class_number(delta);
            rep.target = H * H;
            rep.computed = Complex(cycles::l_value_exponential_sum(delta));
        } else if (id == "l-value") {
            Real H = class_number(delta);
            rep.target = H * H;
            rep.computed = cycles::l_star_value(e2(), delta, 0, topt).value / (12 * sqrt(ad));
        } else if (id == "hecke") {
            rep.params["D"] = std::to_string(D);
            rep.target = 12 * class_number(delta) * class_number(D);
            rep.computed = cycles::trace_cycle(e2(), delta, D, 0, topt).value;
        } else if (id == "square-trace") {
            const long long n = D < 0 ? -D : D;
            rep.params["D"] = std::to_string(-n);
            rep.target = qforms::is_square(n) ? class_number(delta) : Real(0);
            auto one = [](const Complex&) { return Complex(1); };
            rep.computed = trace_cm(one, delta, -n, "1").value / sqrt(Real(n));
        } else {
            throw DomainError("unknown identity '" + id + "'");
        }
        rep.abs_error = abs(rep.computed - Complex(rep.target));
        rep.pass = rep.abs_error < Real(rep.tolerance);
    } catch (const std::exception& e) {
        rep.error = e.what();
        rep.pass = false;
    }
    rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<IdentityReport> identity_suite(const std::vector<long long>& deltas, const std::vector<long long>& Ds,
                                           const SuiteOptions& opt) {
    std::vector<IdentityReport> out;
    for (long long delta : deltas) {
        for (const char* id : {"class-number", "sigma", "l-value"}) out.push_back(run_identity(id, delta, 0, opt));
        const long long ad = delta < 0 ? -delta : delta;
        for (long long D : Ds) {
            if (D <= 0) continue;
            const long long m = ((-D % 4) + 4) % 4;
            if ((m == 0 || m == 1) && !qforms::is_square(ad * D)) out.push_back(run_identity("hecke", delta, D, opt));
            if (D % 4 == 0 || D % 4 == 1) out.push_back(run_identity("square-trace", delta, D, opt));
        }
    }
    return out;
}

}  // namespace shintani::cmtraces
