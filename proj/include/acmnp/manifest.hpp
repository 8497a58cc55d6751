#pragma once

// Sectioned key = value manifests describing a metric, a Reeb field and a
// sampling plan, plus the lattice and structure they instantiate.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acmnp/verify.hpp"

namespace acmnp {

class ManifestError : public std::runtime_error {
public:
    // line = 0 when the error is not tied to a line.
    ManifestError(const std::string& message, int line);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

struct OrbitSpec {
    Point x0{};
    double t0 = 0.0;
    double t1 = 1.0;
    int steps = 200;
};

struct Manifest {
    std::string source_name;
    std::uint64_t digest = 0;  // FNV-1a of the raw text
    CoordNames coords = default_coord_names();
    Box domain;
    ParamTable params;
    std::array<std::string, 6> metric_src;  // g11 g12 g13 g22 g23 g33
    ReebSpec::Kind reeb_kind = ReebSpec::Kind::Xi;
    std::array<std::string, 3> reeb_src;
    int orientation = 1;
    int grid = 5;
    double tol = kDefaultTolerance;
    std::vector<Box> exclude;
    std::optional<OrbitSpec> orbit;

    // Compiled against coords and params.
    std::array<Expr, 6> metric;
    RealVector reeb;
};

std::uint64_t fnv1a(std::string_view bytes);

// Parses and compiles; does not touch the metric numerically.
Manifest parse_manifest(std::string_view text, std::string source_name = "<memory>");

// parse_manifest plus a positive-definiteness check on the sampling lattice.
Manifest load_manifest(const std::filesystem::path& path);

// Closed uniform lattice with n points per axis, lexicographic in (x, y, z),
// minus points inside any excluded box.
std::vector<Point> lattice(const Box& domain, int n, const std::vector<Box>& exclude = {});

struct Structure {
    MetricData metric;
    Frame frame;
    SpinCoefficients spin;
    AcmStructure acm;
    SampleSet at;
    double tol = kDefaultTolerance;
};

struct Overrides {
    std::optional<int> grid;
    std::optional<double> tol;
};

Structure instantiate(const Manifest& mf, const Overrides& ov = {});

}  // namespace acmnp
