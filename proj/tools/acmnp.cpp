// Command-line front end. Exit codes: 0 all checks pass, 1 a check failed
// or a gate refused the command, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "acmnp/report.hpp"

namespace {

std::string point_text(const acmnp::Point& p)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", p[0], p[1], p[2]);
    return buf;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spin coefficients, structure classification and identity checks for 3D almost contact metric "
                 "structures"};
    app.set_version_flag("--version", std::string(acmnp::kToolVersion));

    std::string command;
    std::string manifest_path;
    std::string json_path;
    std::optional<int> grid;
    std::optional<double> tol;
    std::uint64_t seed = 1;
    double amplitude = 0.1;
    bool geodesic = false;
    bool quiet = false;

    app.add_option("command", command, "spin | classify | eta-einstein | kmunu | verify | orbit | report | random")
        ->required();
    app.add_option("manifest", manifest_path, "manifest file (all commands except random)");
    app.add_option("--json", json_path, "write the structured report to this path");
    app.add_option("--grid", grid, "points per axis (overrides the manifest)")->check(CLI::Range(2, 1000));
    app.add_option("--tol", tol, "base tolerance (overrides the manifest)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for random");
    app.add_option("--amplitude", amplitude, "perturbation amplitude for random, in (0, 0.3]");
    app.add_flag("--geodesic", geodesic, "random: draw from the family with geodesic Reeb field");
    app.add_flag("--quiet", quiet, "suppress the text summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto cmd = acmnp::parse_command(command);
    if (!cmd) {
        std::cerr << "error: unknown command '" << command << "'\n";
        return 2;
    }

    try {
        const acmnp::Overrides ov{grid, tol};
        acmnp::CommandResult result;
        if (*cmd == acmnp::Command::Random) {
            result = acmnp::run_random(
                {seed, amplitude, geodesic ? acmnp::RandomFamily::Geodesic : acmnp::RandomFamily::General}, ov);
        } else {
            if (manifest_path.empty()) {
                std::cerr << "error: " << command << " needs a manifest\n";
                return 2;
            }
            const acmnp::Manifest mf = acmnp::load_manifest(manifest_path);
            result = acmnp::run_command(*cmd, mf, ov);
        }
        if (!quiet) {
            std::cout << result.text;
        }
        if (!json_path.empty()) {
            std::ofstream out(json_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << json_path << "\n";
                return 2;
            }
            out << acmnp::canonical_json(result.tree);
        }
        return result.exit_code;
    } catch (const acmnp::ManifestError& e) {
        std::cerr << manifest_path << ": " << e.what() << "\n";
    } catch (const acmnp::MetricError& e) {
        std::cerr << "error: " << e.what() << " at " << point_text(e.where()) << "\n";
    } catch (const acmnp::FrameError& e) {
        std::cerr << "error: " << e.what() << " at " << point_text(e.where()) << "\n";
    } catch (const acmnp::EvaluationError& e) {
        std::cerr << "error: " << e.what() << " in " << e.subexpression() << "\n";
    } catch (const acmnp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const acmnp::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
