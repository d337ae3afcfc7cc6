#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "frechet/json_io.hpp"
#include "frechet/selftest.hpp"

namespace {

using frechet::Json;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw frechet::InvalidSpecError("cannot open input file: " + path);
    return Json::parse(in); // throws nlohmann parse_error with byte position
}

void write_output(const Json& document, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << document.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw frechet::InvalidSpecError("cannot open output file: " + out_path);
    out << document.dump(2) << "\n";
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("FRECHET_SEED"))
        return std::strtoull(env, nullptr, 10);
    return flag_seed;
}

struct EquationFlags {
    std::string equation;
    int n = 1;
    int m = 0;
    std::string mode;
    double tol = 1e-9;

    frechet::EquationDescriptor descriptor() const {
        Json j;
        j["equation"] = equation;
        j["n"] = n;
        if (m != 0)
            j["m"] = m;
        if (!mode.empty())
            j["mode"] = mode;
        j["tol"] = tol;
        return frechet::equation_from_json(j);
    }
};

void add_equation_flags(CLI::App* cmd, EquationFlags& flags, bool mode_flag = true) {
    cmd->add_option("--equation", flags.equation, "one of eq1, eq2, eq3, eq4")->required();
    cmd->add_option("--n", flags.n, "equation degree n >= 1")->required();
    cmd->add_option("--m", flags.m, "root order m >= 2 (radical equations)");
    if (mode_flag) {
        cmd->add_option("--mode", flags.mode, "exact | float (default per equation)");
        cmd->add_option("--tol", flags.tol, "float-mode tolerance (default 1e-9)");
    }
}

frechet::Grid default_grid(const frechet::EquationDescriptor& descriptor, int count,
                           std::uint64_t seed) {
    frechet::GridSpec spec;
    spec.count = count;
    spec.seed = seed;
    if (descriptor.mode == frechet::VerifyMode::ExactCharacteristic) {
        const auto& rad = std::get<frechet::RadicalEquation>(descriptor.equation);
        spec.kind = frechet::GridSpec::Kind::CharacteristicBox;
        spec.sign = rad.m % 2 == 0 ? frechet::GridSpec::Sign::Nonneg : frechet::GridSpec::Sign::Any;
        return frechet::sample_grid(spec);
    }
    spec.kind = frechet::GridSpec::Kind::FloatBoxAvoidingKpi;
    if (std::holds_alternative<frechet::RadicalEquation>(descriptor.equation)) {
        spec.lo = -10.0;
        spec.hi = 10.0;
        spec.kpi_margin = 0.0;
    }
    return frechet::sample_grid(spec);
}

frechet::Grid grid_from_json(const Json& j) {
    if (!j.is_array())
        throw frechet::InvalidSpecError("a grid is an array of [a, b] pairs");
    frechet::Grid grid;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            throw frechet::InvalidSpecError("each grid entry is an [a, b] pair");
        grid.emplace_back(frechet::value_from_json(entry.at(0)),
                          frechet::value_from_json(entry.at(1)));
    }
    return grid;
}

int cmd_solve(const EquationFlags& flags, const std::string& coeffs_path,
              const std::string& out_path) {
    const auto descriptor = flags.descriptor();
    const auto coeffs = frechet::monomial_sum_from_json(read_json_file(coeffs_path));
    const auto candidate = frechet::solve(descriptor.equation, coeffs);
    write_output(frechet::candidate_to_json(candidate), out_path);
    return kExitHolds;
}

int cmd_verify(const EquationFlags& flags, const std::string& candidate_path,
               const std::string& grid_arg, int count, std::uint64_t seed,
               const std::string& out_path) {
    const auto descriptor = flags.descriptor();
    const auto candidate = frechet::candidate_from_json(read_json_file(candidate_path));
    const frechet::Grid grid = grid_arg == "default"
                                   ? default_grid(descriptor, count, effective_seed(seed))
                                   : grid_from_json(read_json_file(grid_arg));
    const auto report =
        frechet::verify(descriptor.equation, candidate, grid, descriptor.mode, descriptor.tol);
    write_output(frechet::verify_report_to_json(report), out_path);
    return report.holds ? kExitHolds : kExitFails;
}

int cmd_decompose(const std::string& input_path, int degree, std::int64_t mod, int count,
                  std::uint64_t seed, const std::string& out_path) {
    const Json input = read_json_file(input_path);
    const auto domain = mod != 0 ? frechet::SemigroupInstance::mod_p(mod)
                                 : frechet::SemigroupInstance::real_line();
    const auto group = mod != 0 ? frechet::AbelianGroup::mod_p(mod)
                                : frechet::AbelianGroup::exact_rational();

    frechet::FunctionHandle handle = [&]() {
        if (input.is_array())
            return frechet::FunctionHandle::sampled(domain, group,
                                                    frechet::table_from_json(input));
        return frechet::make_polynomial(domain, group, frechet::monomial_sum_from_json(input));
    }();

    frechet::Grid grid;
    if (mod != 0) {
        frechet::Rng rng(effective_seed(seed));
        for (int i = 0; i < count; ++i) {
            const auto a = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(mod)));
            const auto b = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(mod)));
            grid.emplace_back(frechet::ModValue{mod, a}, frechet::ModValue{mod, b});
        }
    } else {
        frechet::GridSpec spec;
        spec.kind = frechet::GridSpec::Kind::RationalBox;
        spec.count = count;
        spec.seed = effective_seed(seed);
        spec.nonzero = true;
        grid = frechet::sample_grid(spec);
    }

    const auto sum = frechet::decompose(handle, degree, grid);
    write_output(frechet::monomial_sum_to_json(sum), out_path);
    return kExitHolds;
}

int cmd_recover(const EquationFlags& flags, const std::string& table_path,
                const std::string& out_path) {
    const auto descriptor = flags.descriptor();
    const auto table = frechet::table_from_json(read_json_file(table_path));
    const auto sum = frechet::recover(descriptor.equation, table, descriptor.tol);
    write_output(frechet::monomial_sum_to_json(sum), out_path);
    return kExitHolds;
}

int cmd_trivial(const EquationFlags& flags, const std::string& candidate_path, int samples,
                std::uint64_t seed, const std::string& out_path) {
    const auto descriptor = flags.descriptor();
    const auto* arcsine = std::get_if<frechet::ArcsineEquation>(&descriptor.equation);
    if (!arcsine)
        throw frechet::InvalidParameterError("the triviality check applies to eq3 and eq4");
    const auto candidate = frechet::candidate_from_json(read_json_file(candidate_path));

    frechet::GridSpec spec;
    spec.kind = frechet::GridSpec::Kind::FloatBoxAvoidingKpi;
    spec.count = samples;
    spec.seed = effective_seed(seed);
    std::vector<double> points;
    for (const auto& [a, b] : frechet::sample_grid(spec)) {
        points.push_back(std::get<double>(a));
        (void)b;
    }

    const auto report = frechet::triviality_check(*arcsine, candidate, points, descriptor.tol);
    write_output(frechet::triviality_report_to_json(report), out_path);
    return report.flagged ? kExitFails : kExitHolds;
}

int cmd_fuzz(const std::string& family, std::size_t cases, std::uint64_t seed, int n_min, int n_max,
             int m_min, int m_max, double tol, const std::string& out_path) {
    frechet::FuzzConfig config;
    if (family == "radical")
        config.family = frechet::FuzzConfig::Family::Radical;
    else if (family == "arcsine")
        config.family = frechet::FuzzConfig::Family::Arcsine;
    else
        throw frechet::InvalidParameterError("family must be \"radical\" or \"arcsine\"");
    config.cases = cases;
    config.seed = effective_seed(seed);
    config.n_lo = n_min;
    config.n_hi = n_max;
    config.m_lo = m_min;
    config.m_hi = m_max;
    config.tol = tol;
    const auto report = frechet::fuzz(config);
    write_output(frechet::fuzz_report_to_json(report), out_path);
    return report.unexpected.empty() ? kExitHolds : kExitFails;
}

int cmd_selftest(double arcsine_tol) {
    frechet::AcceptanceConfig config;
    config.arcsine_tol = arcsine_tol;
    const auto results = frechet::run_acceptance_suite(config);
    return frechet::print_acceptance_table(results, std::cout) ? kExitHolds : kExitFails;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-difference calculus of Frechet polynomials and section-method solvers "
                 "for radical and arcsine functional equations"};
    app.require_subcommand(1);

    EquationFlags solve_flags, verify_flags, recover_flags, trivial_flags;
    std::string coeffs_path, candidate_path, table_path, input_path, grid_arg = "default";
    std::string out_path;
    std::string family = "radical";
    int count = 50, samples = 25, degree = 0;
    std::int64_t mod = 0;
    std::uint64_t seed = 1;
    std::size_t cases = 100;
    int n_min = 1, n_max = 3, m_min = 2, m_max = 4;
    double fuzz_tol = 1e-9, arcsine_tol = 1e-9;

    auto* solve_cmd = app.add_subcommand("solve", "canonical solution from coefficients");
    add_equation_flags(solve_cmd, solve_flags);
    solve_cmd->add_option("--coeffs", coeffs_path, "monomial sum JSON")->required();
    solve_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "check a candidate over a grid");
    add_equation_flags(verify_cmd, verify_flags);
    verify_cmd->add_option("--candidate", candidate_path, "candidate JSON")->required();
    verify_cmd->add_option("--grid", grid_arg, "\"default\" or a grid JSON path");
    verify_cmd->add_option("--count", count, "default-grid pair count");
    verify_cmd->add_option("--seed", seed, "default-grid seed");
    verify_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* decompose_cmd =
        app.add_subcommand("decompose", "split a polynomial into monomial components");
    decompose_cmd->add_option("--input", input_path, "monomial sum JSON or [x, value] table")
        ->required();
    decompose_cmd->add_option("--n", degree, "polynomial degree")->required();
    decompose_cmd->add_option("--mod", mod, "work over the integers mod a prime");
    decompose_cmd->add_option("--count", count, "verification grid pair count");
    decompose_cmd->add_option("--seed", seed, "verification grid seed");
    decompose_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* recover_cmd =
        app.add_subcommand("recover", "characteristic coefficients from a raw u-space table");
    add_equation_flags(recover_cmd, recover_flags);
    recover_cmd->add_option("--table", table_path, "[u, value] table JSON")->required();
    recover_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* trivial_cmd =
        app.add_subcommand("trivial", "maximal-domain check for extended arcsine candidates");
    add_equation_flags(trivial_cmd, trivial_flags);
    trivial_cmd->add_option("--candidate", candidate_path, "candidate JSON with an extension map")
        ->required();
    trivial_cmd->add_option("--samples", samples, "number of probe points");
    trivial_cmd->add_option("--seed", seed, "probe seed");
    trivial_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* fuzz_cmd = app.add_subcommand("fuzz", "randomized solution/non-solution round-trips");
    fuzz_cmd->add_option("--family", family, "radical | arcsine")->required();
    fuzz_cmd->add_option("--cases", cases, "generated cases (two verification runs each)");
    fuzz_cmd->add_option("--seed", seed, "generator seed");
    fuzz_cmd->add_option("--n-min", n_min, "smallest degree");
    fuzz_cmd->add_option("--n-max", n_max, "largest degree");
    fuzz_cmd->add_option("--m-min", m_min, "smallest root order (radical)");
    fuzz_cmd->add_option("--m-max", m_max, "largest root order (radical)");
    fuzz_cmd->add_option("--tol", fuzz_tol, "float tolerance");
    fuzz_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the bundled acceptance suite");
    selftest_cmd->add_option("--arcsine-tol", arcsine_tol,
                             "tolerance for the arcsine criteria (default 1e-9)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (solve_cmd->parsed())
            return cmd_solve(solve_flags, coeffs_path, out_path);
        if (verify_cmd->parsed())
            return cmd_verify(verify_flags, candidate_path, grid_arg, count, seed, out_path);
        if (decompose_cmd->parsed())
            return cmd_decompose(input_path, degree, mod, count, seed, out_path);
        if (recover_cmd->parsed())
            return cmd_recover(recover_flags, table_path, out_path);
        if (trivial_cmd->parsed())
            return cmd_trivial(trivial_flags, candidate_path, samples, seed, out_path);
        if (fuzz_cmd->parsed())
            return cmd_fuzz(family, cases, seed, n_min, n_max, m_min, m_max, fuzz_tol, out_path);
        if (selftest_cmd->parsed())
            return cmd_selftest(arcsine_tol);
    } catch (const frechet::DecompositionError& e) {
        std::cerr << "refuted: " << e.what() << "\n";
        return kExitFails;
    } catch (const Json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    } catch (const frechet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
