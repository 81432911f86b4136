#include "fxexp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fxexp/analysis.hpp"
#include "fxexp/csv.hpp"
#include "fxexp/oracle.hpp"

namespace fxexp::cli {

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

int parse_int(std::string_view s)
{
    int v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty())
        throw std::invalid_argument(fmt::format("not an integer: '{}'", s));
    return v;
}

Arithmetic parse_mode(const std::string& s)
{
    if (s == "ones")
        return Arithmetic::ones_complement;
    if (s == "twos")
        return Arithmetic::twos_complement;
    throw UsageError("mode must be ones or twos, got " + s);
}

struct ConfigFlags {
    int p = 16;
    int m = 0;  // 0: P + 1
    int l = 0;  // 0: P + 1
    int wc = 0;  // 0: min(8, M)
    int ws = 0;  // 0: min(11, M)
    std::string mode = "ones";
    std::string variant = "proposed";
    int cubic_guard = 1;
    int square_guard = 2;
    bool low_precision = false;

    void attach(CLI::App* app, bool widths = true)
    {
        app->add_option("--p", p, "input/output fraction bits P")->capture_default_str();
        app->add_option("--m", m, "multiplier fraction bits M [default: P+1]");
        app->add_option("--l", l, "LUT fraction bits L [default: P+1]");
        app->add_option("--mode", mode, "ones or twos")->check(CLI::IsMember({"ones", "twos"}))->capture_default_str();
        app->add_option("--variant", variant, "proposed or partzsch")
            ->check(CLI::IsMember({"proposed", "partzsch"}))
            ->capture_default_str();
        if (widths) {
            app->add_option("--wc", wc, "cubic term width [default: min(8, M)]");
            app->add_option("--ws", ws, "square term width [default: min(11, M)]");
        }
        app->add_option("--cubic-guard", cubic_guard, "extra stored bits on the cubic term")->capture_default_str();
        app->add_option("--square-guard", square_guard, "extra stored bits on the square term")
            ->capture_default_str();
        app->add_flag("--allow-low-precision", low_precision, "permit M < P or L < P");
    }

    [[nodiscard]] ExpConfig build() const
    {
        ExpConfig cfg;
        cfg.out_precision = p;
        cfg.mult_precision = m > 0 ? m : p + 1;
        cfg.lut_precision = l > 0 ? l : p + 1;
        cfg.arithmetic = parse_mode(mode);
        cfg.variant = variant == "partzsch" ? SeriesVariant::partzsch_coeffs : SeriesVariant::proposed_cubic;
        cfg.cubic_width = wc > 0 ? wc : std::min(8, cfg.mult_precision);
        cfg.square_width = ws > 0 ? ws : std::min(11, cfg.mult_precision);
        cfg.cubic_guard_bits = cubic_guard;
        cfg.square_guard_bits = square_guard;
        cfg.allow_low_precision = low_precision;
        cfg.validate();
        return cfg;
    }
};

// Output goes to --out when given, otherwise to the result stream.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write)
{
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file)
        throw std::runtime_error("cannot open " + path + " for writing");
    write(file);
    if (!file)
        throw std::runtime_error("write to " + path + " failed");
}

SweepOptions sweep_options(int threads_flag, bool serial)
{
    SweepOptions o;
    o.serial = serial;
    o.threads = threads_flag;
    if (threads_flag <= 0) {
        if (const char* env = std::getenv("FXEXP_THREADS"); env != nullptr && *env != '\0') {
            try {
                o.threads = parse_int(env);
            } catch (const std::invalid_argument&) {
                throw UsageError(fmt::format("FXEXP_THREADS must be a positive integer, got '{}'", env));
            }
            if (o.threads <= 0)
                throw UsageError(fmt::format("FXEXP_THREADS must be a positive integer, got '{}'", env));
        }
    }
    return o;
}

struct ParsedInput {
    bool negative = false;
    std::uint64_t raw = 0;
    bool quantized = false;  // decimal text that was not exactly representable
};

// Decimal text is rounded to nearest-even at P fraction bits; "0x.." is a raw value.
ParsedInput parse_input(std::string text, int precision, bool allow_negative)
{
    ParsedInput in;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        in.negative = text.front() == '-';
        text.erase(0, 1);
    }
    if (text.empty())
        throw UsageError("empty --input");
    const int int_bits = kMaxWidth - precision;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        const std::string_view digits(text.data() + 2, text.size() - 2);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), in.raw, 16);
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
            throw UsageError("bad hexadecimal input: " + text);
        if (int_bits < 64 && (in.raw >> precision) >> int_bits != 0)
            throw UsageError("input does not fit in " + std::to_string(kMaxWidth) + " bits");
    } else {
        oracle::Real value;
        if (mpfr_set_str(value.get(), text.c_str(), 10, MPFR_RNDN) != 0 || !mpfr_number_p(value.get()))
            throw UsageError("bad decimal input: " + text);
        FixedUQ q;
        try {
            q = oracle::quantize(value, int_bits, precision, RoundingMode::round_nearest_even);
        } catch (const std::exception&) {
            throw UsageError("input " + text + " is not representable with " + std::to_string(precision) +
                             " fraction bits in " + std::to_string(kMaxWidth) + " bits");
        }
        in.raw = q.raw;
        in.quantized = mpfr_cmp(value.get(), oracle::Real::dyadic(q.raw, precision).get()) != 0;
    }
    if (in.raw == 0)
        in.negative = false;
    if (in.negative && !allow_negative)
        throw UsageError("e^-a needs a >= 0; use --function for signed inputs");
    return in;
}

std::string signed_hex(bool negative, std::uint64_t raw) { return fmt::format("{}0x{:x}", negative ? "-" : "", raw); }

struct EvalFlags {
    std::string input;
    std::string function = "exp";
    double alpha = 1.0;
    double mu = 0.0;
    double sigma = 1.0;
    std::string tap = "multiplier";
    bool trace = false;
};

void run_eval(const EvalFlags& f, const ExpConfig& cfg, std::ostream& out)
{
    const int p = cfg.out_precision;
    const bool plain = f.function == "exp";
    const ParsedInput in = parse_input(f.input, p, !plain);
    const long double in_value = std::ldexp(static_cast<long double>(in.raw), -p) * (in.negative ? -1 : 1);

    fmt::print(out, "input   {}  {}{}\n", signed_hex(in.negative, in.raw), csv::format_real(in_value),
               in.quantized ? "  (rounded from " + f.input + ")" : "");
    fmt::print(out, "config  {}\n", cfg.describe());

    const Luts luts = build_luts(cfg);
    long double result = 0.0L;
    long double exact = 0.0L;
    if (plain) {
        const FixedUQ a{in.raw, kMaxWidth - p, p};
        OpCount ops;
        const ExpTrace t = exp_neg_trace(a, cfg, luts, &ops);
        if (f.trace) {
            fmt::print(out, "split   sat={} int4={} frac3={} residual=0x{:x}{}\n", t.parts.sat, t.parts.int4,
                       t.parts.frac3, t.parts.residual, t.saturated ? "  (saturated)" : "");
            fmt::print(out, "luts    {}\n", t.lut_product.to_string());
            fmt::print(out, "series  {}\n", t.series.to_string());
            fmt::print(out, "wide    {}\n", t.wide.to_string());
            fmt::print(out, "ops     mul={} add={} sub={} inv={}\n", ops.multiplications, ops.additions,
                       ops.subtractions, ops.inversions);
        }
        result = t.out.value();
        exact = oracle::exp_neg(in.raw, p);
        fmt::print(out, "output  0x{:x}  {}\n", t.out.raw, csv::format_real(result));
    } else {
        DerivedSpec spec;
        if (f.function == "sigmoid")
            spec.function = DerivedFunction::sigmoid;
        else if (f.function == "tanh")
            spec.function = DerivedFunction::tanh;
        else if (f.function == "gaussian")
            spec.function = DerivedFunction::gaussian;
        else
            spec.function = DerivedFunction::elu;
        spec.alpha = f.alpha;
        spec.mu = f.mu;
        spec.sigma = f.sigma;
        spec.tap = f.tap == "quantized" ? ExpTap::quantized_output : ExpTap::multiplier_output;
        spec.validate();
        const SignedFixed x{in.negative, FixedUQ{in.raw, kMaxWidth - p, p}};
        const SignedFixed y = eval_derived(spec, x, cfg, luts);
        result = y.value();
        exact = reference_derived(spec, in_value);
        fmt::print(out, "output  {}  {}\n", signed_hex(y.negative, y.magnitude.raw), csv::format_real(result));
    }
    fmt::print(out, "exact   {}\n", csv::format_real(exact));
    fmt::print(out, "error   {} ulp\n", csv::format_real(std::ldexp(std::fabs(result - exact), p)));
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> values;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const int lo = parse_int(std::string_view(text).substr(0, colon));
        const int hi = parse_int(std::string_view(text).substr(colon + 1));
        if (hi < lo)
            throw std::invalid_argument("empty range " + text);
        for (int v = lo; v <= hi; ++v)
            values.push_back(v);
        return values;
    }
    std::string_view rest(text);
    for (;;) {
        const auto comma = rest.find(',');
        values.push_back(parse_int(rest.substr(0, comma)));
        if (comma == std::string_view::npos)
            return values;
        rest.remove_prefix(comma + 1);
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bit-accurate model and error analysis of a fixed-point e^-x unit", "fxexp"};
    app.require_subcommand(1);
    int threads = 0;
    bool serial = false;
    std::string out_path;
    app.add_option("--threads", threads, "worker threads for sweeps (default: FXEXP_THREADS or all cores)");
    app.add_flag("--serial", serial, "use the single-threaded reference kernels");

    CLI::App* eval = app.add_subcommand("eval", "evaluate one input and compare with the exact value");
    ConfigFlags eval_cfg;
    eval_cfg.attach(eval);
    EvalFlags eval_flags;
    eval->add_option("--input", eval_flags.input, "decimal value or 0x-prefixed raw value at P fraction bits")
        ->required();
    eval->add_option("--function", eval_flags.function, "exp, sigmoid, tanh, gaussian or elu")
        ->check(CLI::IsMember({"exp", "sigmoid", "tanh", "gaussian", "elu"}))
        ->capture_default_str();
    eval->add_option("--alpha", eval_flags.alpha, "ELU scale")->capture_default_str();
    eval->add_option("--mu", eval_flags.mu, "Gaussian centre")->capture_default_str();
    eval->add_option("--sigma", eval_flags.sigma, "Gaussian width")->capture_default_str();
    eval->add_option("--tap", eval_flags.tap, "exp signal used by derived functions: multiplier or quantized")
        ->check(CLI::IsMember({"multiplier", "quantized"}))
        ->capture_default_str();
    eval->add_flag("--trace", eval_flags.trace, "print intermediate datapath values");

    CLI::App* sweep = app.add_subcommand("sweep", "exhaustive error sweep of one configuration");
    ConfigFlags sweep_cfg;
    sweep_cfg.attach(sweep);
    sweep->add_option("--out", out_path, "CSV file (default: stdout)");

    CLI::App* coeff = app.add_subcommand("coeff", "shift-add versus exact cubic coefficients");
    int coeff_p = 16;
    coeff->add_option("--p", coeff_p, "residual grid precision")->capture_default_str();
    coeff->add_option("--out", out_path, "CSV file (default: stdout)");

    CLI::App* fig1 = app.add_subcommand("fig1", "series length versus input range");
    std::string fig1_terms = "2:4";
    std::string fig1_range = "-16:0";
    int fig1_grid = 16;
    fig1->add_option("--terms", fig1_terms, "term counts (2 = linear)")->capture_default_str();
    fig1->add_option("--range", fig1_range, "log2 of the range upper bound")->capture_default_str();
    fig1->add_option("--grid-bits", fig1_grid, "log2 of the sample count per range")->capture_default_str();
    fig1->add_option("--out", out_path, "CSV file (default: stdout)");

    CLI::App* fig5 = app.add_subcommand("fig5", "error over P, M, L and arithmetic mode");
    std::string fig5_p = "8,12,16";
    std::string fig5_m = "0:4";
    std::string fig5_l = "0:3";
    std::string fig5_modes = "ones,twos";
    fig5->add_option("--p", fig5_p, "output precisions")->capture_default_str();
    fig5->add_option("--m-offsets", fig5_m, "M - P values")->capture_default_str();
    fig5->add_option("--l-offsets", fig5_l, "L - P values")->capture_default_str();
    fig5->add_option("--modes", fig5_modes, "comma-separated subset of ones,twos")->capture_default_str();
    fig5->add_option("--out", out_path, "CSV file (default: stdout)");

    CLI::App* table1 = app.add_subcommand("table1", "derived-function errors");
    int t1_p = 16;
    std::string t1_prec = "17,19";
    std::string t1_mode = "ones";
    table1->add_option("--p", t1_p, "output precision")->capture_default_str();
    table1->add_option("--precisions", t1_prec, "values used for both M and L")->capture_default_str();
    table1->add_option("--mode", t1_mode, "ones or twos")->check(CLI::IsMember({"ones", "twos"}))->capture_default_str();
    std::string t1_reference = "prepared";
    std::string t1_tap = "multiplier";
    table1->add_option("--reference", t1_reference,
                       "compare against the exact function of the rounded exp argument (prepared) or of x (input)")
        ->check(CLI::IsMember({"prepared", "input"}))
        ->capture_default_str();
    table1->add_option("--tap", t1_tap, "exp signal fed to the combination: multiplier or quantized")
        ->check(CLI::IsMember({"multiplier", "quantized"}))
        ->capture_default_str();
    table1->add_option("--out", out_path, "CSV file (default: stdout)");

    CLI::App* table2 = app.add_subcommand("table2", "accuracy bits over cubic and square term widths");
    ConfigFlags t2_cfg;
    t2_cfg.attach(table2, false);
    std::string t2_wc = "5:16";
    std::string t2_ws = "10:16";
    table2->add_option("--wc", t2_wc, "cubic widths")->capture_default_str();
    table2->add_option("--ws", t2_ws, "square widths")->capture_default_str();
    table2->add_option("--out", out_path, "CSV file (default: stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const SweepOptions opts = sweep_options(threads, serial);
        if (eval->parsed()) {
            run_eval(eval_flags, eval_cfg.build(), out);
        } else if (sweep->parsed()) {
            const ExpConfig cfg = sweep_cfg.build();
            const SweepRow row{cfg, sweep_error(cfg, opts)};
            emit(out_path, out, [&](std::ostream& s) { csv::write_sweep(s, std::span(&row, 1)); });
        } else if (coeff->parsed()) {
            const CoeffScan scan = coeff_error_scan(coeff_p, opts);
            emit(out_path, out, [&](std::ostream& s) { csv::write_coeff(s, scan); });
        } else if (fig1->parsed()) {
            const auto rows = series_range_study(parse_int_list(fig1_terms), parse_int_list(fig1_range), fig1_grid, opts);
            emit(out_path, out, [&](std::ostream& s) { csv::write_fig1(s, rows); });
        } else if (fig5->parsed()) {
            Fig5Grid grid;
            grid.precisions = parse_int_list(fig5_p);
            grid.mult_offsets = parse_int_list(fig5_m);
            grid.lut_offsets = parse_int_list(fig5_l);
            grid.modes.clear();
            std::stringstream ss(fig5_modes);
            for (std::string m; std::getline(ss, m, ',');)
                grid.modes.push_back(parse_mode(m));
            const auto rows = mult_lut_sweep(grid, opts);
            emit(out_path, out, [&](std::ostream& s) { csv::write_sweep(s, rows); });
        } else if (table1->parsed()) {
            std::vector<ExpConfig> configs;
            for (const int prec : parse_int_list(t1_prec))
                configs.push_back(ExpConfig::uniform(t1_p, prec, prec, parse_mode(t1_mode)));
            for (const ExpConfig& c : configs)
                c.validate();
            const auto rows = derived_error_table(
                configs, opts,
                t1_reference == "input" ? DerivedReference::exact_input : DerivedReference::prepared_argument,
                t1_tap == "quantized" ? ExpTap::quantized_output : ExpTap::multiplier_output);
            emit(out_path, out, [&](std::ostream& s) { csv::write_table1(s, rows); });
        } else if (table2->parsed()) {
            ExpConfig base = t2_cfg.build();
            const std::vector<int> wcs = parse_int_list(t2_wc);
            const std::vector<int> wss = parse_int_list(t2_ws);
            const Sweeper sweeper(base.out_precision, opts);
            const auto cells = term_precision_table(base, wcs, wss, sweeper);
            emit(out_path, out, [&](std::ostream& s) { csv::write_table2(s, cells); });
        }
    } catch (const UsageError& e) {
        fmt::print(err, "fxexp: {}\n", e.what());
        return kExitUsage;
    } catch (const FormatError& e) {
        fmt::print(err, "fxexp: {}\n", e.what());
        return kExitUsage;
    } catch (const OverflowError& e) {
        fmt::print(err, "fxexp: {}\n", e.what());
        return kExitUsage;
    } catch (const DomainError& e) {
        fmt::print(err, "fxexp: {}\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        fmt::print(err, "fxexp: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(err, "fxexp: {}\n", e.what());
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace fxexp::cli
