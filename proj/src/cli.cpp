#include "jsr/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>

#include "jsr/apps.hpp"
#include "jsr/gripenberg.hpp"
#include "jsr/io.hpp"
#include "jsr/polytope.hpp"

namespace jsr {
namespace {

struct InputOpts {
    std::string input_path;
    std::string fixture_name;
};

void add_input_options(CLI::App* cmd, InputOpts& io) {
    auto* a = cmd->add_option("--input", io.input_path, "matrix-set file (format: `s J` + blocks)");
    auto* b = cmd->add_option("--fixture", io.fixture_name, "named fixture (see `fixtures`)");
    a->excludes(b);
}

MatrixSet load_input(const InputOpts& io) {
    if (!io.input_path.empty()) return load_matrix_set(io.input_path);
    if (!io.fixture_name.empty()) return fixture(io.fixture_name);
    throw ParseError("either --input or --fixture is required");
}

void add_engine_options(CLI::App* cmd, EngineOptions& eng) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--delta", eng.polytope.delta, "scaling delta (1 = exact mode)")
        ->check(CLI::Range(1e-6, 1.0));
    cmd->add_option("--eps", eng.polytope.eps, "absorption tolerance epsilon");
    cmd->add_option("--tau", eng.polytope.tau, "nearly-s.m.p. threshold tau");
    cmd->add_option("--T", eng.polytope.extra_t, "extra-vertex singular value threshold");
    cmd->add_option("--h", eng.polytope.balancing_horizon, "balancing horizon");
    cmd->add_option("--max-iter", eng.polytope.max_iterations, "iteration cap");
    cmd->add_option("--max-vertices", eng.polytope.max_vertices, "vertex cap");
    cmd->add_option("--threads", eng.polytope.threads, "worker threads (0 = hardware)");
    cmd->add_option("-N,--keep", eng.grip_n, "Gripenberg frontier parameter N");
    cmd->add_option("-D,--depth", eng.grip_d, "Gripenberg depth D");
    cmd->add_flag("--skip-reducibility-check", eng.skip_reducibility_check,
                  "skip invariant-subspace preprocessing");
}

void write_trace(const std::string& path, const std::vector<IterationTrace>& trace) {
    std::ofstream f(path);
    if (!f) throw ParseError("cannot open trace file for writing: " + path);
    f << "iteration,|V_k|,|E_{k+1}|,added,b_k,lower,upper,wall\n";
    for (const auto& t : trace)
        f << t.iteration << ',' << t.v_size << ',' << t.batch << ',' << t.added << ','
          << format_number(t.b) << ',' << format_number(t.lower) << ','
          << format_number(t.upper) << ',' << format_number(t.wall_seconds) << '\n';
}

void print_candidates(std::ostream& out, const std::vector<ProductWord>& words) {
    for (const auto& w : words) out << "candidate: " << w.str() << "\n";
}

int cmd_estimate(const InputOpts& io, int n, int d, bool classic, double delta_acc,
                 int depth_cap, bool random, std::uint64_t seed, std::ostream& out) {
    MatrixSet set = load_input(io);
    SearchReport rep;
    if (classic)
        rep = classic_gripenberg(set, delta_acc, depth_cap);
    else if (random)
        rep = random_modified_gripenberg(set, n, d, seed);
    else
        rep = modified_gripenberg(set, n, d);
    out << "rho_c = " << format_number(rep.lower_bound) << "\n";
    if (rep.upper_bound) {
        out << "interval = " << format_interval(rep.lower_bound, *rep.upper_bound) << "\n";
        out << (rep.upper_final ? "termination: frontier emptied (certified interval)\n"
                                : "termination: depth cap (interval not final)\n");
    } else {
        out << "note: lower bound only; the true JSR may be larger\n";
    }
    print_candidates(out, rep.candidates);
    out << "evaluations = " << rep.evaluations << "\n";
    return 0;
}

int cmd_exact(const InputOpts& io, EngineOptions& eng, const std::string& trace_path,
              std::ostream& out) {
    MatrixSet set = load_input(io);
    EngineResult res = compute_jsr(set, eng);
    for (const auto& t : res.last_run.trace)
        out << "JSR in " << format_interval(t.lower, t.upper) << "  (iteration " << t.iteration
            << ", |V| = " << t.v_size << ")\n";
    if (!trace_path.empty()) write_trace(trace_path, res.last_run.trace);
    if (!res.reducibility.irreducible)
        out << "note: reducible family, bounds combined over diagonal blocks\n";
    if (res.used_delta_fallback) out << "note: delta = 1-1e-9 fallback used\n";
    if (res.restarts > 0) out << "restarts = " << res.restarts << "\n";
    print_candidates(out, res.smp_words);
    out << "JSR " << (res.bounds.exact ? "= " + format_number(res.bounds.lower)
                                       : "in " + format_interval(res.bounds.lower, res.bounds.upper))
        << "\n";
    return res.bounds.exact ? 0 : 1;
}

int cmd_brute(const InputOpts& io, int k, std::ostream& out) {
    MatrixSet set = load_input(io);
    JsrBounds b = brute_force_bounds(set, k);
    out << "JSR in " << format_interval(b.lower, b.upper) << "\n";
    return 0;
}

int cmd_capacity(const std::vector<std::string>& patterns, EngineOptions& eng,
                 const std::string& trace_path, std::ostream& out) {
    std::vector<DifferencePattern> pats;
    for (const auto& p : patterns) pats.push_back(DifferencePattern::parse(p));
    CapacityResult res = capacity(pats, eng);
    out << "J = " << res.matrices.count() << ", dim = " << res.matrices.dim() << "\n";
    out << "JSR " << (res.exact ? "= " + format_number(res.jsr.lower)
                                : "in " + format_interval(res.jsr.lower, res.jsr.upper))
        << "\n";
    out << "capacity " << (res.exact ? "= " + format_number(res.lower)
                                     : "in " + format_interval(res.lower, res.upper))
        << "\n";
    if (!trace_path.empty()) throw ParseError("--trace is only available for `exact`");
    return res.exact ? 0 : 1;
}

int cmd_regularity(int daubechies_n, const std::string& mask_path, int order,
                   EngineOptions& eng, std::ostream& out) {
    SubdivisionScheme sch;
    if (daubechies_n > 0 && !mask_path.empty())
        throw ParseError("--daubechies and --mask are mutually exclusive");
    if (daubechies_n > 0) {
        sch = daubechies_scheme(daubechies_n);
        if (order <= 0) order = daubechies_n;
    } else if (!mask_path.empty()) {
        sch = load_mask(mask_path);
        if (order <= 0) order = 1;
    } else {
        throw ParseError("either --daubechies n or --mask FILE is required");
    }
    if (std::abs(sch.mask_sum() - static_cast<double>(std::llabs(sch.dilation))) > 1e-8)
        out << "warning: mask sum " << format_number(sch.mask_sum()) << " != |m|\n";
    RegularityResult res = regularity(sch, order, eng);
    out << "dim = " << res.matrices.dim() << " (window size " << res.omega.size() << ", order "
        << order << ")\n";
    out << "JSR " << (res.exact ? "= " + format_number(res.jsr.lower)
                                : "in " + format_interval(res.jsr.lower, res.jsr.upper))
        << "\n";
    out << "alpha " << (res.exact ? "= " + format_number(res.alpha_lower)
                                  : "in " + format_interval(res.alpha_lower, res.alpha_upper))
        << "\n";
    return res.exact ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"certified joint-spectral-radius computations (invariant polytope method)"};
    app.require_subcommand(1);

    InputOpts est_in, ex_in, br_in;
    int est_n = 20, est_d = 100, est_depth_cap = 200;
    bool est_classic = false, est_random = false;
    double est_delta_acc = 0.99;
    std::uint64_t est_seed = 1;
    auto* est = app.add_subcommand("estimate", "lower bound via (modified) Gripenberg search");
    add_input_options(est, est_in);
    est->add_option("-N,--keep", est_n, "frontier parameter N");
    est->add_option("-D,--depth", est_d, "depth D");
    est->add_flag("--classic", est_classic, "classic Gripenberg with certified interval");
    est->add_option("--delta-acc", est_delta_acc, "classic accuracy delta in (0,1]");
    est->add_option("--depth-cap", est_depth_cap, "classic depth cap");
    est->add_flag("--random", est_random, "random selection variant");
    est->add_option("--seed", est_seed, "seed for --random");

    EngineOptions ex_eng;
    std::string ex_trace;
    auto* ex = app.add_subcommand("exact", "exact JSR / certified bounds via invariant polytopes");
    add_input_options(ex, ex_in);
    add_engine_options(ex, ex_eng);
    ex->add_option("--trace", ex_trace, "per-iteration CSV trace output path");

    int br_k = 5;
    auto* br = app.add_subcommand("brute", "brute-force two-sided bounds over words of length <= k");
    add_input_options(br, br_in);
    br->add_option("-k", br_k, "max word length");

    std::vector<std::string> cap_patterns;
    EngineOptions cap_eng;
    auto* cap = app.add_subcommand("capacity", "code capacity of forbidden difference patterns");
    cap->add_option("patterns", cap_patterns,
                    "patterns over {o,+,-,p}, e.g. o+po; prefix the list with -- "
                    "when a pattern starts with + or -")
        ->required();
    add_engine_options(cap, cap_eng);

    int reg_daub = 0, reg_order = 0;
    std::string reg_mask;
    EngineOptions reg_eng;
    auto* reg = app.add_subcommand("regularity", "Hoelder regularity of a refinable function");
    reg->add_option("--daubechies", reg_daub, "Daubechies order n (2..8)");
    reg->add_option("--mask", reg_mask, "mask file (`dilation m` header + coefficients)");
    reg->add_option("--order", reg_order, "difference order (default: n, or 1 for masks)");
    add_engine_options(reg, reg_eng);

    auto* fx = app.add_subcommand("fixtures", "list built-in worked-example fixtures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (est->parsed())
            return cmd_estimate(est_in, est_n, est_d, est_classic, est_delta_acc, est_depth_cap,
                                est_random, est_seed, out);
        if (ex->parsed()) return cmd_exact(ex_in, ex_eng, ex_trace, out);
        if (br->parsed()) return cmd_brute(br_in, br_k, out);
        if (cap->parsed()) return cmd_capacity(cap_patterns, cap_eng, "", out);
        if (reg->parsed()) return cmd_regularity(reg_daub, reg_mask, reg_order, reg_eng, out);
        if (fx->parsed()) {
            for (const auto& n : fixture_names()) out << n << "\n";
            return 0;
        }
        err << "error: no subcommand\n";
        return 2;
    } catch (const UnsupportedCaseError& e) {
        err << "error (case C): " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace jsr
