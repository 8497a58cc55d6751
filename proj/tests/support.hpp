#pragma once

#include <string>
#include <vector>

#include "acmnp/manifest.hpp"

namespace acmnp::testing {

inline Expr P(const std::string& src)
{
    static const std::vector<std::string> coords{"x", "y", "z"};
    return parse_expression(src, coords);
}

inline Manifest golden(const std::string& name)
{
    return load_manifest(std::string(ACMNP_MANIFEST_DIR) + "/" + name + ".acm");
}

inline Structure golden_structure(const std::string& name) { return instantiate(golden(name)); }

inline SampleSet single(const Point& p)
{
    SampleSet s;
    s.points = {p};
    return s;
}

inline std::complex<double> at(const ComplexField& f, const Point& p) { return sample(f, single(p))[0]; }

inline double at(const Expr& e, const Point& p) { return evaluate(e, p); }

inline double max_abs_on(const ComplexField& f, const SampleSet& s) { return max_abs(sample(f, s)).value; }

}  // namespace acmnp::testing
