// stepsum: compute step-function sums directly and through their integral
// identities, run verification sweeps, and time the harmonic computations.
//
// Exit codes: 0 success / all pass, 1 verification failure, 2 usage error,
// 3 argument outside the supported range.

#include <stepsum/stepsum.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace stepsum;

enum exit_code : int {
    exit_ok       = 0,
    exit_failure  = 1,
    exit_usage    = 2,
    exit_range    = 3,
};

/// Usage problems detected after parsing.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string int128_to_string(__int128 v)
{
    if (v == 0)
        return "0";
    bool const  neg = v < 0;
    std::string s;
    while (v != 0) {
        int const digit = static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
        v /= 10;
    }
    if (neg)
        s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

double parse_real(std::string const& text, char const* what)
{
    std::size_t used = 0;
    double      v    = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (std::exception const&) {
        throw usage_error(std::string(what) + ": not a number: " + text);
    }
    if (used != text.size() || !std::isfinite(v))
        throw usage_error(std::string(what) + ": not a finite number: " + text);
    return v;
}

/// Sieve large enough for x; x beyond the sieve budget is a range error.
prime_table table_for(double x)
{
    if (!(x <= static_cast<double>(sieve_options{}.max_limit)))
        throw range_error("x=" + format_scalar(x) + " exceeds the sieve budget " + std::to_string(sieve_options{}.max_limit));
    return sieve(std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(x))));
}

// ---------------------------------------------------------------------------
// primes

int cmd_primes(std::int64_t limit)
{
    if (limit < 2) {
        std::cerr << "primes: --limit must be >= 2\n";
        return exit_usage;
    }
    auto const table = sieve(static_cast<std::uint64_t>(limit));
    std::string out;
    for (auto p : table.primes()) {
        out += std::to_string(p);
        out += '\n';
    }
    std::cout << out << "# pi(" << limit << ")=" << table.primes().size() << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// compute

/// Methods available per function; the first is the default.
std::map<std::string, std::vector<std::string>> const compute_methods = {
    {"harmonic", {"direct", "identity"}},
    {"hp", {"direct", "eq18", "from_pi", "eq24"}},
    {"pi", {"direct", "identity", "eq20"}},
    {"prime_sum", {"direct", "identity"}},
    {"li2", {"direct"}},
    {"r", {"direct"}},
    {"mertens", {"eq24"}},
};

bool exact_method(std::string const& function, std::string const& method)
{
    if (function == "harmonic" || function == "prime_sum")
        return true;
    if (function == "hp")
        return method != "eq24";
    if (function == "pi")
        return method != "eq20";
    return false;
}

template <scalar T>
std::string compute_value(std::string const& function, std::string const& method, T const& x)
{
    if (function == "harmonic") {
        if (method == "direct") {
            if (x < T(0))
                throw domain_error("harmonic: x must be >= 0");
            return format_scalar(harmonic_direct<T>(floor_to_int(x)));
        }
        return format_scalar(harmonic_via_eq15(x));
    }

    auto const table = table_for(to_double(x));
    if (function == "hp") {
        if (method == "direct")
            return format_scalar(hp_direct(table, x));
        if (method == "eq18")
            return format_scalar(hp_via_eq18(table, x));
        if (method == "from_pi")
            return format_scalar(hp_from_pi(table, x));
    }
    if (function == "pi") {
        if (method == "direct")
            return std::to_string(pi_direct(table, x));
        if (method == "identity")
            return format_scalar(pi_via_eq17(table, x));
    }
    if (function == "prime_sum") {
        if (method == "direct")
            return int128_to_string(prime_power_sum_direct(table, x, 1));
        return format_scalar(prime_sum_via_identity(table, x));
    }
    if constexpr (!is_exact_v<T>) {
        if (function == "hp" || function == "mertens")
            return format_scalar(hp_via_mertens_eq24(table, x));
        if (function == "pi")
            return format_scalar(pi_via_eq20(table, x));
        if (function == "li2")
            return format_scalar(li2(x).value);
        if (function == "r")
            return format_scalar(r_function(table, x));
    }
    throw usage_error("compute: unsupported combination " + function + "/" + method);
}

int cmd_compute(std::string const& function, std::string method, std::string const& x_text, bool exact)
{
    auto const it = compute_methods.find(function);
    if (it == compute_methods.end())
        throw usage_error("compute: unknown function '" + function + "'");
    if (method.empty())
        method = it->second.front();
    if (std::find(it->second.begin(), it->second.end(), method) == it->second.end())
        throw usage_error("compute: function '" + function + "' has no method '" + method + "'");
    if (exact && !exact_method(function, method))
        throw usage_error("compute: " + function + "/" + method + " has no exact mode");

    std::string x_shown;
    std::string value;
    if (exact) {
        rational x;
        try {
            x = parse_rational(x_text);
        } catch (std::exception const&) {
            throw usage_error("compute: --x is not a rational number: " + x_text);
        }
        x_shown = format_scalar(x);
        value   = compute_value<rational>(function, method, x);
    } else {
        double const x = parse_real(x_text, "--x");
        x_shown        = format_scalar(x);
        value          = compute_value<double>(function, method, x);
    }
    std::cout << function << ' ' << method << ' ' << x_shown << ' ' << value << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify

/// S log-spaced points over [lo, xmax] plus every atom below min(xmax, 100),
/// sorted and deduplicated.
std::vector<double> verify_samples(identity_id id, prime_table const* table, double xmax, std::size_t count)
{
    double const        lo = needs_primes(id) ? 2.0 : 1.0;
    std::vector<double> xs;
    if (count == 1) {
        xs.push_back(xmax);
    } else {
        double const ratio = std::log(xmax / lo);
        for (std::size_t i = 0; i < count; ++i)
            xs.push_back(i + 1 == count ? xmax : lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1)));
    }
    double const cap = std::min(xmax, 100.0);
    if (table != nullptr) {
        for (auto p : table->primes())
            if (p < cap)
                xs.push_back(p);
    } else {
        for (double n = 1.0; n < cap; n += 1.0)
            xs.push_back(n);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

struct verify_args {
    std::string                  identity;
    std::string                  xmax_text;
    std::int64_t                 samples = 0;
    std::string                  tol_text;
    std::optional<std::uint64_t> seed;
    std::optional<double>        k;
    std::string                  csv_path;
    unsigned                     jobs  = 1;
    bool                         exact = false;
};

int cmd_verify(verify_args const& a)
{
    std::string upper = a.identity;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    auto const id = parse_identity(upper);
    if (!id)
        throw usage_error("verify: unknown identity '" + a.identity + "'");
    if (a.samples < 1)
        throw usage_error("verify: --samples must be >= 1");
    if (a.jobs < 1)
        throw usage_error("verify: --jobs must be >= 1");
    double const xmax = parse_real(a.xmax_text, "--xmax");
    double const tol  = parse_real(a.tol_text, "--tol");
    if (!(tol >= 0.0))
        throw usage_error("verify: --tol must be >= 0");
    double const lo = needs_primes(*id) ? 2.0 : 1.0;
    if (!(xmax >= lo))
        throw usage_error("verify: --xmax must be >= " + format_scalar(lo) + " for " + std::string(to_string(*id)));
    if (a.exact && !exact_capable(*id))
        throw usage_error("verify: " + std::string(to_string(*id)) + " has no exact mode");

    std::optional<prime_table> table;
    if (needs_primes(*id))
        table = table_for(xmax);
    prime_table const* tp = table ? &*table : nullptr;

    sweep_options const opts{a.exact ? numeric_mode::exact : numeric_mode::floating, a.jobs};
    std::vector<verification_report> reports;
    if (*id == identity_id::eq25_int && a.seed) {
        reports = eq25_interval_sweep(*table, *a.seed, static_cast<std::size_t>(a.samples), 2.0, xmax, tol, opts);
    } else {
        auto const xs = verify_samples(*id, tp, xmax, static_cast<std::size_t>(a.samples));
        try {
            reports = run_sweep(*id, tp, xs, a.k, tol, opts);
        } catch (config_error const& e) {
            throw usage_error(e.what());
        }
    }

    if (!a.csv_path.empty()) {
        std::ofstream out(a.csv_path, std::ios::binary);
        if (!out)
            throw usage_error("verify: cannot open '" + a.csv_path + "' for writing");
        write_csv(out, reports);
        if (!out)
            throw usage_error("verify: writing '" + a.csv_path + "' failed");
    }

    std::size_t passed = 0;
    for (auto const& r : reports) {
        if (r.pass) {
            ++passed;
            continue;
        }
        std::cout << "FAIL " << csv_row(r);
        if (!r.error.empty())
            std::cout << " (" << r.error << ')';
        std::cout << '\n';
    }
    std::cout << to_string(*id) << ": " << passed << '/' << reports.size() << " pass\n";
    return passed == reports.size() ? exit_ok : exit_failure;
}

// ---------------------------------------------------------------------------
// bench

struct bench_row {
    std::string   method;
    std::int64_t  median_ns = 0;
    double        result    = 0.0;
};

template <typename F>
bench_row time_method(std::string method, int reps, F const& f)
{
    using clock = std::chrono::steady_clock;
    bench_row row{std::move(method)};
    row.result = f(); // warm-up, not timed
    std::vector<std::int64_t> times;
    times.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        auto const   t0 = clock::now();
        double const v  = f();
        auto const   t1 = clock::now();
        times.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
        if (v != row.result)
            throw std::runtime_error("bench: " + row.method + " is not reproducible across reps");
    }
    std::sort(times.begin(), times.end());
    auto const n  = times.size();
    row.median_ns = n % 2 == 1 ? times[n / 2] : (times[n / 2 - 1] + times[n / 2]) / 2;
    return row;
}

int cmd_bench(std::string const& op, std::string const& x_text, int reps)
{
    if (op != "harmonic")
        throw usage_error("bench: unknown op '" + op + "'");
    if (reps < 3)
        throw usage_error("bench: --reps must be >= 3");
    double const x = parse_real(x_text, "--x");
    if (!(x >= 1.0))
        throw usage_error("bench: --x must be >= 1");
    if (!(x <= 1e12))
        throw range_error("bench: --x too large");
    std::int64_t const n = floor_to_int(x);

    std::vector<bench_row> rows;
    rows.push_back(time_method("direct", reps, [n] { return harmonic_direct_naive(n); }));
    rows.push_back(time_method("direct_compensated", reps, [n] { return harmonic_direct<double>(n); }));
    rows.push_back(time_method("identity", reps, [x] { return harmonic_via_eq15(x); }));

    std::cout << "op,method,x,reps,median_ns,result\n";
    for (auto const& r : rows)
        std::cout << op << ',' << r.method << ',' << csv_float(x) << ',' << reps << ',' << r.median_ns << ','
                  << csv_float(r.result) << '\n';
    std::cout << "# abs_diff(identity,direct_compensated)=" << csv_float(std::fabs(rows[2].result - rows[1].result)) << '\n';
    std::cout << "# abs_diff(direct,direct_compensated)=" << csv_float(std::fabs(rows[0].result - rows[1].result)) << '\n';
    return exit_ok;
}

int run(int argc, char** argv)
{
    CLI::App app{"Step-function sums, their integral identities, and verification sweeps"};
    app.require_subcommand(1);

    std::int64_t limit     = 0;
    auto*        primes    = app.add_subcommand("primes", "List the primes up to a limit");
    primes->add_option("--limit", limit, "Upper limit (>= 2)")->required();

    std::string function;
    std::string method;
    std::string x_text;
    bool        exact   = false;
    auto*       compute = app.add_subcommand("compute", "Evaluate one function by one method");
    compute->add_option("function", function, "harmonic | hp | pi | prime_sum | li2 | r | mertens")->required();
    compute->add_option("--x", x_text, "Argument (a rational such as 21/2 is accepted with --exact)")->required();
    compute->add_option("--method", method, "direct | identity | eq18 | from_pi | eq20 | eq24");
    compute->add_flag("--exact", exact, "Exact rational arithmetic");

    verify_args va;
    auto*       verify = app.add_subcommand("verify", "Sweep an identity against its direct oracle");
    verify->add_option("--identity", va.identity, "EQ6 | EQ10 | EQ13 | EQ15 | NMAX | TRIANGULAR | EQ17 | PRIME_SUM | EQ18 | "
                                                  "HP_FROM_PI | EQ20 | EQ24 | EQ25_INT")
        ->required();
    verify->add_option("--xmax", va.xmax_text, "Largest sample point")->required();
    verify->add_option("--samples", va.samples, "Number of log-spaced sample points")->required();
    verify->add_option("--tol", va.tol_text, "Pass tolerance on absolute or relative error")->required();
    verify->add_option("--seed", va.seed, "Seed; EQ25_INT then checks random subintervals of [2, xmax]");
    verify->add_option("--k", va.k, "Exponent for EQ10 / EQ13 (default 1)");
    verify->add_option("--csv", va.csv_path, "Write the reports as CSV");
    verify->add_option("--jobs", va.jobs, "Worker threads (default 1)");
    verify->add_flag("--exact", va.exact, "Exact rational arithmetic");

    std::string op;
    std::string bench_x;
    int         reps  = 0;
    auto*       bench = app.add_subcommand("bench", "Time direct vs identity-based harmonic sums");
    bench->add_option("--op", op, "harmonic")->required();
    bench->add_option("--x", bench_x, "Argument (>= 1)")->required();
    bench->add_option("--reps", reps, "Timed repetitions (>= 3)")->required();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (primes->parsed())
            return cmd_primes(limit);
        if (compute->parsed())
            return cmd_compute(function, method, x_text, exact);
        if (verify->parsed())
            return cmd_verify(va);
        return cmd_bench(op, bench_x, reps);
    } catch (range_error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_range;
    } catch (resource_error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_range;
    } catch (std::invalid_argument const& e) { // usage, mode and config errors
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::domain_error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace

int main(int argc, char** argv)
{
    return run(argc, argv);
}
