#include "acmnp/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace acmnp {

ManifestError::ManifestError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line)
{
}

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Splits on commas outside double quotes and parentheses.
std::vector<std::string> split_list(std::string_view s, int line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    int depth = 0;
    for (const char c : s) {
        if (c == '"') {
            quoted = !quoted;
        } else if (!quoted && c == '(') {
            ++depth;
        } else if (!quoted && c == ')') {
            --depth;
        }
        if (c == ',' && !quoted && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        throw ManifestError("unterminated string", line);
    }
    out.push_back(trim(cur));
    return out;
}

std::string unquote(const std::string& s, int line)
{
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    throw ManifestError("expected a quoted expression, got '" + s + "'", line);
}

double number(const std::string& s, int line)
{
    if (s.empty()) {
        throw ManifestError("expected a number", line);
    }
    Expr e;
    try {
        e = parse_expression(s, std::span<const std::string>{});
    } catch (const ParseError& err) {
        throw ManifestError("bad number '" + s + "': " + err.what(), line);
    }
    if (!e.is_constant()) {
        throw ManifestError("expected a constant, got '" + s + "'", line);
    }
    return e.constant_value();
}

int integer(const std::string& s, int line)
{
    const double v = number(s, line);
    if (v != static_cast<double>(static_cast<int>(v))) {
        throw ManifestError("expected an integer, got '" + s + "'", line);
    }
    return static_cast<int>(v);
}

std::pair<double, double> interval(const std::string& s, int line)
{
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        throw ManifestError("expected an interval a..b, got '" + s + "'", line);
    }
    const double a = number(trim(s.substr(0, dots)), line);
    const double b = number(trim(s.substr(dots + 2)), line);
    if (!(a < b)) {
        throw ManifestError("degenerate interval '" + s + "'", line);
    }
    return {a, b};
}

Box box3(const std::string& value, int line)
{
    const auto parts = split_list(value, line);
    if (parts.size() != 3) {
        throw ManifestError("expected three intervals", line);
    }
    Box b;
    for (int i = 0; i < 3; ++i) {
        const auto [lo, hi] = interval(parts[static_cast<std::size_t>(i)], line);
        b.lo[static_cast<std::size_t>(i)] = lo;
        b.hi[static_cast<std::size_t>(i)] = hi;
    }
    return b;
}

struct Entry {
    std::string value;
    int line = 0;
};

}  // namespace

Manifest parse_manifest(std::string_view text, std::string source_name)
{
    Manifest mf;
    mf.source_name = std::move(source_name);
    mf.digest = fnv1a(text);

    static const std::set<std::string, std::less<>> sections{"chart", "params", "metric", "structure", "sampling",
                                                             "orbit"};
    static const std::map<std::string, std::set<std::string, std::less<>>, std::less<>> keys{
        {"chart", {"coords", "domain"}},
        {"metric", {"g11", "g12", "g13", "g22", "g23", "g33"}},
        {"structure", {"xi", "eta", "orientation"}},
        {"sampling", {"grid", "tol", "exclude"}},
        {"orbit", {"x0", "t", "steps"}},
    };

    // section -> key -> entry
    std::map<std::string, std::map<std::string, Entry, std::less<>>, std::less<>> seen;
    std::vector<Entry> excludes;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ManifestError("malformed section header", line_no);
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!sections.contains(section)) {
                throw ManifestError("unknown section [" + section + "]", line_no);
            }
            seen[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ManifestError("expected key = value", line_no);
        }
        if (section.empty()) {
            throw ManifestError("key outside of any section", line_no);
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw ManifestError("empty key", line_no);
        }
        if (const auto it = keys.find(section); it != keys.end() && !it->second.contains(key)) {
            throw ManifestError("unknown key '" + key + "' in [" + section + "]", line_no);
        }
        if (section == "sampling" && key == "exclude") {
            excludes.push_back({value, line_no});
            continue;
        }
        auto& slot = seen[section];
        if (slot.contains(key)) {
            throw ManifestError("duplicate key '" + key + "'", line_no);
        }
        slot[key] = {value, line_no};
    }

    const auto get = [&](std::string_view sec, std::string_view key) -> const Entry* {
        const auto s = seen.find(sec);
        if (s == seen.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };

    if (const Entry* e = get("chart", "coords")) {
        const auto names = split_list(e->value, e->line);
        if (names.size() != 3) {
            throw ManifestError("coords needs three names", e->line);
        }
        for (int i = 0; i < 3; ++i) {
            mf.coords[static_cast<std::size_t>(i)] = names[static_cast<std::size_t>(i)];
        }
        if (mf.coords[0] == mf.coords[1] || mf.coords[0] == mf.coords[2] || mf.coords[1] == mf.coords[2]) {
            throw ManifestError("coordinate names must be distinct", e->line);
        }
    }
    if (const Entry* e = get("chart", "domain")) {
        mf.domain = box3(e->value, e->line);
    } else {
        throw ManifestError("missing [chart] domain", 0);
    }

    if (const auto s = seen.find("params"); s != seen.end()) {
        for (const auto& [name, e] : s->second) {
            if (std::find(mf.coords.begin(), mf.coords.end(), name) != mf.coords.end()) {
                throw ManifestError("parameter '" + name + "' shadows a coordinate", e.line);
            }
            mf.params[name] = number(e.value, e.line);
        }
    }
    std::vector<std::string> param_names;
    for (const auto& kv : mf.params) param_names.push_back(kv.first);
    const std::vector<std::string> coord_names(mf.coords.begin(), mf.coords.end());

    const auto compile = [&](const std::string& src, int line) {
        try {
            return parse_expression(src, coord_names, param_names);
        } catch (const ParseError& err) {
            throw ManifestError("in \"" + src + "\": " + err.what(), line);
        }
    };

    static const std::array<const char*, 6> gkeys{"g11", "g12", "g13", "g22", "g23", "g33"};
    for (std::size_t k = 0; k < 6; ++k) {
        const Entry* e = get("metric", gkeys[k]);
        const bool diagonal = k == 0 || k == 3 || k == 5;
        if (e == nullptr) {
            if (diagonal) {
                throw ManifestError(std::string("missing [metric] ") + gkeys[k], 0);
            }
            mf.metric_src[k] = "0";
            mf.metric[k] = Expr(0.0);
            continue;
        }
        mf.metric_src[k] = unquote(e->value, e->line);
        mf.metric[k] = compile(mf.metric_src[k], e->line);
    }

    const Entry* xi = get("structure", "xi");
    const Entry* eta = get("structure", "eta");
    if ((xi == nullptr) == (eta == nullptr)) {
        throw ManifestError(xi ? "both xi and eta given; supply exactly one"
                               : "missing reeb field: supply exactly one of xi and eta",
                            xi ? std::max(xi->line, eta->line) : 0);
    }
    const Entry* reeb = xi ? xi : eta;
    mf.reeb_kind = xi ? ReebSpec::Kind::Xi : ReebSpec::Kind::Eta;
    const auto comps = split_list(reeb->value, reeb->line);
    if (comps.size() != 3) {
        throw ManifestError("reeb field needs three components", reeb->line);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        mf.reeb_src[i] = unquote(comps[i], reeb->line);
        mf.reeb[i] = compile(mf.reeb_src[i], reeb->line);
    }
    if (const Entry* e = get("structure", "orientation")) {
        if (e->value == "+1" || e->value == "1") {
            mf.orientation = 1;
        } else if (e->value == "-1") {
            mf.orientation = -1;
        } else {
            throw ManifestError("orientation must be +1 or -1", e->line);
        }
    }

    if (const Entry* e = get("sampling", "grid")) {
        mf.grid = integer(e->value, e->line);
        if (mf.grid < 2) {
            throw ManifestError("grid must be at least 2", e->line);
        }
    }
    if (const Entry* e = get("sampling", "tol")) {
        mf.tol = number(e->value, e->line);
        if (!(mf.tol > 0.0)) {
            throw ManifestError("tol must be positive", e->line);
        }
    }
    for (const auto& e : excludes) {
        mf.exclude.push_back(box3(e.value, e.line));
    }

    if (seen.contains("orbit")) {
        OrbitSpec o;
        const Entry* x0 = get("orbit", "x0");
        const Entry* t = get("orbit", "t");
        if (x0 == nullptr || t == nullptr) {
            throw ManifestError("[orbit] needs x0 and t", 0);
        }
        const auto xs = split_list(x0->value, x0->line);
        if (xs.size() != 3) {
            throw ManifestError("x0 needs three coordinates", x0->line);
        }
        for (std::size_t i = 0; i < 3; ++i) o.x0[i] = number(xs[i], x0->line);
        std::tie(o.t0, o.t1) = interval(t->value, t->line);
        if (const Entry* s = get("orbit", "steps")) {
            o.steps = integer(s->value, s->line);
            if (o.steps < 1) {
                throw ManifestError("steps must be positive", s->line);
            }
        } else {
            o.steps = std::max(1, static_cast<int>(std::ceil(200.0 * (o.t1 - o.t0))));
        }
        if (!mf.domain.contains(o.x0)) {
            throw ManifestError("x0 lies outside the domain", x0->line);
        }
        mf.orbit = o;
    }
    return mf;
}

std::vector<Point> lattice(const Box& domain, int n, const std::vector<Box>& exclude)
{
    std::vector<Point> pts;
    const auto coord = [&](int axis, int i) {
        const auto a = static_cast<std::size_t>(axis);
        if (i == n - 1) return domain.hi[a];
        return domain.lo[a] + (domain.hi[a] - domain.lo[a]) * i / (n - 1);
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const Point p{coord(0, i), coord(1, j), coord(2, k)};
                if (std::none_of(exclude.begin(), exclude.end(), [&](const Box& b) { return b.contains(p); })) {
                    pts.push_back(p);
                }
            }
        }
    }
    return pts;
}

namespace {

SampleSet sampling(const Manifest& mf, int grid)
{
    SampleSet at;
    at.points = lattice(mf.domain, grid, mf.exclude);
    at.params = mf.params;
    if (at.points.size() < 8) {
        throw ManifestError("fewer than 8 sample points remain after exclusions", 0);
    }
    return at;
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ManifestError("cannot open " + path.string(), 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    Manifest mf = parse_manifest(buf.str(), path.filename().string());

    const auto& c = mf.metric;
    const Expr minor2 = c[0] * c[3] - c[1] * c[1];
    const Expr det = c[0] * (c[3] * c[5] - c[4] * c[4]) - c[1] * (c[1] * c[5] - c[4] * c[2]) +
                     c[2] * (c[1] * c[4] - c[3] * c[2]);
    const std::array<Expr, 3> minors{c[0], minor2, det};
    const SampleSet at = sampling(mf, mf.grid);
    const Program prog(minors, at.params);
    for (const auto& p : at.points) {
        const auto v = prog.run(p);
        for (std::size_t k = 0; k < 3; ++k) {
            if (!(v[k] > 0.0)) {
                throw MetricError("metric is not positive-definite (leading minor " + std::to_string(k + 1) + ")",
                                  p);
            }
        }
    }
    return mf;
}

Structure instantiate(const Manifest& mf, const Overrides& ov)
{
    Structure s;
    s.tol = ov.tol.value_or(mf.tol);
    s.at = sampling(mf, ov.grid.value_or(mf.grid));
    s.metric = build_metric(mf.metric);
    check_positive_definite(s.metric, s.at);
    const Point center{0.5 * (mf.domain.lo[0] + mf.domain.hi[0]), 0.5 * (mf.domain.lo[1] + mf.domain.hi[1]),
                       0.5 * (mf.domain.lo[2] + mf.domain.hi[2])};
    s.frame = build_frame(s.metric, ReebSpec{mf.reeb_kind, mf.reeb}, mf.orientation, s.at, center);
    s.spin = spin_coefficients(s.metric, s.frame);
    s.acm = make_acm(s.metric, s.frame);
    return s;
}

}  // namespace acmnp
