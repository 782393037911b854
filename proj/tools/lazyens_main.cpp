// lazyens command-line front end: solve for the maximum-entropy ensemble of
// a density matrix, reproduce the classical die numbers, evaluate the
// partition function, and run sampling-based verification.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lazyens/lazyens.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v, int precision = 12) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::string fmt_fixed(double v, int decimals = 9) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << v;
    return os.str();
}

void print_matrix(std::ostream& os, const lazyens::ComplexMatrix& m, const std::string& label) {
    os << label << ":\n";
    for (std::size_t i = 0; i < m.dim(); ++i) {
        os << " ";
        for (std::size_t j = 0; j < m.dim(); ++j) {
            const lazyens::Complex z = m(i, j);
            os << "  " << fmt(z.real()) << (z.imag() < 0 ? "-" : "+")
               << fmt(std::abs(z.imag())) << "i";
        }
        os << "\n";
    }
}

json solve_report_json(const lazyens::SolveResult& result, double kl) {
    const lazyens::SolveReport& rep = result.report;
    return json{
        {"n", result.ensemble.dim()},
        {"iterations", rep.iterations},
        {"converged", rep.converged},
        {"grad_norm", rep.grad_norm},
        {"dual_value", rep.dual_value},
        {"logZ", result.ensemble.log_z()},
        {"kl", kl},
        {"bounds_check",
         json{{"y_min", rep.y_min},
              {"y_max", rep.y_max},
              {"spread_limit", rep.spread_limit},
              {"sign_ok", rep.bounds_sign_ok},
              {"spread_ok", rep.bounds_spread_ok}}},
        {"B", lazyens::matrix_to_json(result.ensemble.parameter().matrix())},
        {"absorbedB", lazyens::matrix_to_json(result.ensemble.absorbed_parameter().matrix())},
    };
}

void write_report_file(const std::string& path, const json& report) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw lazyens::Error(lazyens::ErrorCode::bad_input, "cannot write '" + path + "'");
    out << report.dump(2) << "\n";
}

struct SolveArgs {
    std::string rho_path;
    double tol = 1e-10;
    int max_iter = 200;
    bool as_json = false;
    std::string out_path;
};

int cmd_solve(const SolveArgs& args) {
    const lazyens::DensityMatrix rho =
        lazyens::validate_density(lazyens::load_matrix_file(args.rho_path));

    lazyens::SolveOptions opts;
    opts.tol = args.tol;
    opts.max_iter = args.max_iter;
    try {
        const lazyens::SolveResult result = lazyens::solve(rho, opts);
        const double kl = lazyens::kl_from_uniform(result.ensemble, rho).nats;
        const json report = solve_report_json(result, kl);
        write_report_file(args.out_path, report);
        if (args.as_json) {
            std::cout << report.dump(2) << "\n";
        } else {
            std::cout << "n           " << result.ensemble.dim() << "\n"
                      << "iterations  " << result.report.iterations << "\n"
                      << "grad_norm   " << fmt(result.report.grad_norm) << "\n"
                      << "logZ        " << fmt(result.ensemble.log_z()) << "\n"
                      << "kl          " << fmt(kl) << "\n"
                      << "bounds      y_min=" << fmt(result.report.y_min)
                      << " y_max=" << fmt(result.report.y_max)
                      << " spread_limit=" << fmt(result.report.spread_limit)
                      << " sign_ok=" << (result.report.bounds_sign_ok ? "yes" : "no")
                      << " spread_ok=" << (result.report.bounds_spread_ok ? "yes" : "no")
                      << "\n";
            print_matrix(std::cout, result.ensemble.parameter().matrix(), "B");
            print_matrix(std::cout, result.ensemble.absorbed_parameter().matrix(), "absorbedB");
        }
        return 0;
    } catch (const lazyens::SolveNoConvergence& e) {
        // partial report still written
        const lazyens::SolveResult& partial = e.partial();
        json report = solve_report_json(partial, 0.0);
        report.erase("kl");
        report["error"] = e.what();
        write_report_file(args.out_path, report);
        std::cerr << "error: " << e.what() << "\n";
        if (args.as_json) std::cout << report.dump(2) << "\n";
        return 3;
    }
}

struct DieArgs {
    std::vector<double> values;
    double mean = 0.0;
    double tol = 1e-12;
    bool as_json = false;
};

int cmd_die(const DieArgs& args) {
    const lazyens::GibbsDie die = lazyens::solve_beta(args.values, args.mean, args.tol);
    const double entropy = lazyens::shannon_entropy(die.probs);
    if (args.as_json) {
        std::cout << json{{"values", die.values},
                          {"beta", die.beta},
                          {"probs", die.probs},
                          {"mean", die.mean()},
                          {"entropy", entropy}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "beta     " << fmt_fixed(die.beta) << "\n"
                  << "mean     " << fmt_fixed(die.mean()) << "\n"
                  << "entropy  " << fmt_fixed(entropy) << "\n";
        for (std::size_t k = 0; k < die.probs.size(); ++k)
            std::cout << "p[" << (k + 1) << "] (A=" << fmt(die.values[k]) << ")  "
                      << fmt_fixed(die.probs[k]) << "\n";
    }
    return 0;
}

struct ZfunArgs {
    std::vector<double> b;
    bool as_json = false;
};

int cmd_zfun(const ZfunArgs& args) {
    const lazyens::PartitionValue value =
        lazyens::evaluate_partition(args.b, /*with_hessian=*/true);
    if (args.as_json) {
        std::cout << json{{"b", args.b},
                          {"logZ", value.log_z},
                          {"gradient", value.gradient},
                          {"hessian", *value.hessian}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "logZ      " << fmt(value.log_z) << "\n";
        std::cout << "gradient ";
        for (double g : value.gradient) std::cout << " " << fmt(g);
        std::cout << "\nhessian\n";
        for (const auto& row : *value.hessian) {
            std::cout << " ";
            for (double h : row) std::cout << " " << fmt(h);
            std::cout << "\n";
        }
    }
    return 0;
}

struct SampleArgs {
    std::string rho_path;
    std::string param_path;
    std::size_t count = 10000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_path;
    bool as_json = false;
};

void dump_states(const std::string& path, const lazyens::SampleBatch& batch) {
    std::ofstream out(path);
    if (!out) throw lazyens::Error(lazyens::ErrorCode::bad_input, "cannot write '" + path + "'");
    out << "# n=" << batch.dim() << " count=" << batch.count << " seed=" << batch.seed << "\n";
    out << std::setprecision(17);
    for (const lazyens::PureState& state : batch.states) {
        for (std::size_t k = 0; k < state.amplitudes.size(); ++k) {
            if (k) out << ",";
            out << state.amplitudes[k].real() << "," << state.amplitudes[k].imag();
        }
        out << "\n";
    }
}

int cmd_sample(const SampleArgs& args) {
    if (args.rho_path.empty() == args.param_path.empty())
        throw lazyens::Error(lazyens::ErrorCode::bad_input,
                             "provide exactly one of --rho or --param");
    lazyens::SampleOptions opts;
    opts.threads = args.threads;
    opts.keep_states = !args.out_path.empty();

    lazyens::ComplexMatrix reference(1);
    const lazyens::LazyEnsemble ens = [&] {
        if (!args.rho_path.empty()) {
            const lazyens::DensityMatrix rho =
                lazyens::validate_density(lazyens::load_matrix_file(args.rho_path));
            reference = rho.matrix().matrix();
            return lazyens::solve(rho).ensemble;
        }
        lazyens::HermitianMatrix b(lazyens::load_matrix_file(args.param_path));
        lazyens::LazyEnsemble e(std::move(b));
        reference = lazyens::ensemble_average(e).matrix().matrix();
        return e;
    }();

    const lazyens::SampleBatch batch = lazyens::sample(ens, args.count, args.seed, opts);
    if (!args.out_path.empty()) dump_states(args.out_path, batch);
    const double max_z = lazyens::max_entry_z(batch, reference);

    if (args.as_json) {
        std::cout << json{{"n", batch.dim()},
                          {"count", batch.count},
                          {"seed", batch.seed},
                          {"accept_rate", batch.accept_rate},
                          {"proposals", batch.proposals},
                          {"max_z", max_z},
                          {"dump", args.out_path}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "n            " << batch.dim() << "\n"
                  << "count        " << batch.count << "\n"
                  << "seed         " << batch.seed << "\n"
                  << "accept_rate  " << fmt(batch.accept_rate) << "\n"
                  << "max_z        " << fmt(max_z) << "\n";
        if (!args.out_path.empty()) std::cout << "dump         " << args.out_path << "\n";
    }
    return 0;
}

struct VerifyArgs {
    std::string rho_path;
    std::size_t count = 1000000;
    std::uint64_t seed = 1;
    int threads = 0;
    bool as_json = false;
};

int cmd_verify(const VerifyArgs& args) {
    const lazyens::DensityMatrix rho =
        lazyens::validate_density(lazyens::load_matrix_file(args.rho_path));
    const lazyens::SolveResult solved = lazyens::solve(rho);

    lazyens::SampleOptions opts;
    opts.threads = args.threads;
    opts.keep_states = false;
    const lazyens::SampleBatch batch =
        lazyens::sample(solved.ensemble, args.count, args.seed, opts);

    const double max_z = lazyens::max_entry_z(batch, rho.matrix().matrix());
    const double kl_exact = lazyens::kl_from_uniform(solved.ensemble, rho).nats;
    const lazyens::MonteCarloEstimate kl_est = lazyens::estimate_kl(solved.ensemble, batch);
    const double kl_z = kl_est.std_error > 0.0
                            ? std::abs(kl_est.estimate - kl_exact) / kl_est.std_error
                            : (std::abs(kl_est.estimate - kl_exact) < 1e-12 ? 0.0 : 1e300);
    const bool low_power = args.count < 1000;
    const bool pass = max_z <= 4.0 && kl_z <= 4.0;

    if (args.as_json) {
        std::cout << json{{"n", batch.dim()},        {"count", batch.count},
                          {"seed", batch.seed},      {"accept_rate", batch.accept_rate},
                          {"max_z", max_z},          {"kl_exact", kl_exact},
                          {"kl_estimate", kl_est.estimate}, {"kl_std_error", kl_est.std_error},
                          {"kl_z", kl_z},            {"low_power", low_power},
                          {"pass", pass}}
                         .dump(2)
                  << "\n";
    } else {
        if (low_power)
            std::cout << "warning: count " << args.count
                      << " gives little statistical power; z-scores reported anyway\n";
        std::cout << "n            " << batch.dim() << "\n"
                  << "count        " << batch.count << "\n"
                  << "seed         " << batch.seed << "\n"
                  << "accept_rate  " << fmt(batch.accept_rate) << "\n"
                  << "max_z        " << fmt(max_z) << "\n"
                  << "kl_exact     " << fmt(kl_exact) << "\n"
                  << "kl_estimate  " << fmt(kl_est.estimate) << " (se " << fmt(kl_est.std_error)
                  << ", z " << fmt(kl_z) << ")\n"
                  << "verdict      " << (pass ? "PASS" : "FAIL") << " (criterion: all |z| <= 4)\n";
    }
    return pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum-entropy ensembles of pure quantum states"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve for the ensemble parameter B");
    solve_cmd->add_option("--rho", solve_args.rho_path, "density matrix JSON file")->required();
    solve_cmd->add_option("--tol", solve_args.tol, "dual gradient tolerance");
    solve_cmd->add_option("--max-iter", solve_args.max_iter, "Newton iteration cap");
    solve_cmd->add_flag("--json", solve_args.as_json, "JSON output");
    solve_cmd->add_option("--out", solve_args.out_path, "write JSON report to file");

    DieArgs die_args;
    CLI::App* die_cmd = app.add_subcommand("die", "classical maximum-entropy die");
    die_cmd->add_option("--values", die_args.values, "face values, comma separated")
        ->required()
        ->delimiter(',');
    die_cmd->add_option("--mean", die_args.mean, "observed mean")->required();
    die_cmd->add_option("--tol", die_args.tol, "mean residual tolerance");
    die_cmd->add_flag("--json", die_args.as_json, "JSON output");

    ZfunArgs zfun_args;
    CLI::App* zfun_cmd = app.add_subcommand("zfun", "partition function, gradient, Hessian");
    zfun_cmd->add_option("--b", zfun_args.b, "eigenvalues of B, comma separated")
        ->required()
        ->delimiter(',');
    zfun_cmd->add_flag("--json", zfun_args.as_json, "JSON output");

    SampleArgs sample_args;
    CLI::App* sample_cmd = app.add_subcommand("sample", "draw pure states from an ensemble");
    sample_cmd->add_option("--rho", sample_args.rho_path, "density matrix JSON (solved first)");
    sample_cmd->add_option("--param", sample_args.param_path, "ensemble parameter B JSON");
    sample_cmd->add_option("--count", sample_args.count, "number of states");
    sample_cmd->add_option("--seed", sample_args.seed, "RNG seed");
    sample_cmd->add_option("--threads", sample_args.threads, "worker threads");
    sample_cmd->add_option("--out", sample_args.out_path, "CSV state dump path");
    sample_cmd->add_flag("--json", sample_args.as_json, "JSON output");

    VerifyArgs verify_args;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "solve, sample, and compare the empirical mean to rho");
    verify_cmd->add_option("--rho", verify_args.rho_path, "density matrix JSON file")->required();
    verify_cmd->add_option("--count", verify_args.count, "number of states");
    verify_cmd->add_option("--seed", verify_args.seed, "RNG seed");
    verify_cmd->add_option("--threads", verify_args.threads, "worker threads");
    verify_cmd->add_flag("--json", verify_args.as_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_args);
        if (die_cmd->parsed()) return cmd_die(die_args);
        if (zfun_cmd->parsed()) return cmd_zfun(zfun_args);
        if (sample_cmd->parsed()) return cmd_sample(sample_args);
        if (verify_cmd->parsed()) return cmd_verify(verify_args);
    } catch (const lazyens::SolveNoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const lazyens::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == lazyens::ErrorCode::no_convergence ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
