#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bflux/mesh.hpp"
#include "bflux/study.hpp"

namespace {

int run_config(const std::string& path) {
    const bflux::StudyConfig config = bflux::parse_config_file(path);
    return bflux::run(config, std::cout);
}

int dump_config_mesh(const std::string& path) {
    const bflux::StudyConfig config = bflux::parse_config_file(path);
    const int p = config.p_list.empty() ? 0 : config.p_list.front();
    switch (config.problem) {
        case bflux::Problem::study1d: {
            const bflux::Mesh1D mesh = bflux::build_mesh_1d(1.0, 8, config.m, p);
            bflux::dump_mesh(mesh, std::cout);
            return 0;
        }
        case bflux::Problem::study2d_square: {
            bflux::SideSet sides;
            sides.left = sides.right = sides.bottom = sides.top = true;
            const bflux::TensorMesh2D mesh =
                bflux::build_tensor_mesh_2d(8, 8, p, config.mode, false, sides);
            bflux::dump_mesh(mesh.quads, std::cout);
            return 0;
        }
        case bflux::Problem::study2d_disk: {
            const bflux::MappedMesh2D mesh = bflux::build_disk_mesh(1.0, 1, p);
            bflux::dump_mesh(mesh.quads, std::cout);
            return 0;
        }
        default: {  // periodic strip is also the decouple_check geometry
            bflux::SideSet sides;
            sides.bottom = sides.top = true;
            const bflux::TensorMesh2D mesh =
                bflux::build_tensor_mesh_2d(8, 8, p, config.mode, true, sides);
            bflux::dump_mesh(mesh.quads, std::cout);
            return 0;
        }
    }
}

int run_check(const std::string& suite, std::uint64_t seed) {
    if (suite == "appendix") {
        const bflux::InequalityReport report = bflux::check_appendix_inequalities(10000, seed);
        std::cout << report.samples << " samples per inequality\n"
                  << "greens decay bound violations: " << report.decay_violations << "\n"
                  << "exp ratio bound violations: " << report.exp_ratio_violations << "\n"
                  << "exp pair bound violations: " << report.exp_pair_violations << "\n"
                  << "exp/sinh bound violations: " << report.exp_sinh_violations << "\n"
                  << report.total() << " violations\n";
        return report.total() == 0 ? 0 : 2;
    }
    if (suite == "eigen") {
        const bflux::SpectralCheckReport report = bflux::run_spectral_checks({8, 16, 32}, 1.0, 2.0);
        std::cout << "eigen identity max deviation: "
                  << bflux::format_double(report.max_eigen_identity_error) << "\n"
                  << "l2 orthogonality max deviation: "
                  << bflux::format_double(report.max_l2_orthogonality_error) << "\n"
                  << "mode orthogonality max deviation: "
                  << bflux::format_double(report.max_mode_orthogonality_error) << "\n"
                  << "ratio bounds: " << (report.ratio_bounds_hold ? "hold" : "violated") << "\n";
        const bool ok = report.ratio_bounds_hold && report.max_eigen_identity_error < 1e-11 &&
                        report.max_l2_orthogonality_error < 1e-11 &&
                        report.max_mode_orthogonality_error < 1e-11;
        std::cout << (ok ? "0 violations\n" : "FAILED\n");
        return ok ? 0 : 2;
    }
    // decouple
    bflux::Coefficients coeff;
    coeff.b0 = 1.0;
    coeff.b1 = 1.0;
    coeff.c = 2.0;
    const auto results = bflux::run_decouple_check(coeff, {8, 16}, {0, 2});
    double worst = 0.0;
    for (const auto& r : results) {
        std::cout << "decouple " << r.nx << "x" << r.ny << " p=" << r.p
                  << " discrepancy=" << bflux::format_double(r.discrepancy) << "\n";
        worst = std::max(worst, r.discrepancy);
    }
    std::cout << "max discrepancy " << bflux::format_double(worst) << "\n";
    return worst <= 1e-8 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary p-refinement convergence studies"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* cmd_run = app.add_subcommand("run", "run the studies described by a config file");
    cmd_run->add_option("config", config_path, "plain-text key = value config")->required();

    std::string suite;
    std::uint64_t seed = 42;
    CLI::App* cmd_check = app.add_subcommand("check", "run a verification suite");
    cmd_check->add_option("--suite", suite, "appendix | eigen | decouple")
        ->required()
        ->check(CLI::IsMember({"appendix", "eigen", "decouple"}));
    cmd_check->add_option("--seed", seed, "random seed for sampled checks");

    std::string dump_path;
    CLI::App* cmd_dump = app.add_subcommand("dump-mesh", "print the coarse mesh for a config");
    cmd_dump->add_option("config", dump_path, "plain-text key = value config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // --help exits 0; bad usage is a config error
    }

    try {
        if (cmd_run->parsed()) return run_config(config_path);
        if (cmd_check->parsed()) return run_check(suite, seed);
        if (cmd_dump->parsed()) return dump_config_mesh(dump_path);
    } catch (const bflux::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const bflux::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
