#pragma once

#include "shintani/forms.hpp"
#include "shintani/qforms.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace shintani::cmtraces {

using Evaluator = std::function<Complex(const Complex&)>;

struct TraceResult {
    Complex value;
    int class_count = 0;
    bool stabilizer_weighted = true;
    long long delta = 0, D = 0;
    std::string f_name;
};

// sum over positive definite classes of discriminant -|delta||D| of chi_delta(Q) F(z_Q) / |Gamma_Q|.
// Requires D < 0 and sgn(delta) D = 0, 1 mod 4.
TraceResult trace_cm(const Evaluator& F, long long delta, long long D, const std::string& f_name = "F");

// J evaluated after reduction to the fundamental domain
Evaluator j_evaluator(int order = 128);

// Coefficients of the generating series of twisted singular moduli: 1 at index delta and
// tr_delta^+(J, -n)/sqrt(n) at index n = 1..D_max. The complex variant keeps imaginary parts;
// f_series throws if any exceeds 1e-8.
std::map<int, Complex> f_series_complex(long long delta, int D_max, int j_order = 128);
std::map<int, Real> f_series(long long delta, int D_max, int j_order = 128);

struct IdentityReport {
    std::string identity_id;
    std::map<std::string, std::string> params;
    Real target;
    Complex computed;
    Real abs_error;
    double tolerance = 0;
    bool pass = false;
    double runtime_ms = 0;
    std::string error;  // set when the computation itself failed
};

struct SuiteOptions {
    int threads = 1;
    double tolerance_override = 0;  // > 0 replaces each identity's default tolerance
};

// Identity ids: "hecke" (delta, D), "square-trace" (delta, D = |D|), "class-number" (delta),
// "sigma" (delta), "l-value" (delta). Failures land in the report, never in exceptions.
IdentityReport run_identity(const std::string& id, long long delta, long long D, const SuiteOptions& opt = {});
const std::vector<std::string>& identity_ids();

// Every applicable (identity, parameter) combination in deterministic order.
std::vector<IdentityReport> identity_suite(const std::vector<long long>& deltas, const std::vector<long long>& Ds,
                                           const SuiteOptions& opt = {});

}  // namespace shintani::cmtraces
