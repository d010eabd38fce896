#include "sonine/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "sonine/errors.hpp"

namespace sonine {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"kernel", {"type", "alpha", "beta", "mu", "alphas"}},
        {"operator", {"type", "length", "s", "epsilon", "modes", "nodes"}},
        {"source", {"type", "p", "q"}},
        {"initial", {"type", "scale", "mode", "path"}},
        {"time", {"T", "steps", "mesh", "grading_r"}},
        {"tolerances", {"fixed_point_tol", "max_iters", "blowup_threshold"}},
        {"output", {"dir", "keep_fields"}},
    };
    return s;
}

struct Reader {
    const std::string& file;
    int line;

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(file, line, msg); }

    double real(const std::string& key, const std::string& v) const {
        const char* b = v.c_str();
        char* end = nullptr;
        const double x = std::strtod(b, &end);
        if (end == b || *end != '\0' || !std::isfinite(x)) fail(key + ": expected a finite number, got '" + v + "'");
        return x;
    }

    int integer(const std::string& key, const std::string& v) const {
        const char* b = v.c_str();
        char* end = nullptr;
        const long x = std::strtol(b, &end, 10);
        if (end == b || *end != '\0' || x < -1000000000L || x > 1000000000L)
            fail(key + ": expected an integer, got '" + v + "'");
        return static_cast<int>(x);
    }

    bool boolean(const std::string& key, const std::string& v) const {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        fail(key + ": expected true or false, got '" + v + "'");
    }

    std::vector<double> list(const std::string& key, const std::string& v) const {
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(real(key, trim(item)));
        if (out.empty()) fail(key + ": empty list");
        return out;
    }
};

void assign(RunConfig& c, const std::string& sec, const std::string& key, const std::string& v, const Reader& r) {
    if (sec == "kernel") {
        if (key == "type") c.kernel.type = v;
        else if (key == "alpha") c.kernel.alpha = r.real(key, v);
        else if (key == "beta") c.kernel.beta = r.real(key, v);
        else if (key == "mu") c.kernel.mu = r.real(key, v);
        else c.kernel.alphas = r.list(key, v);
    } else if (sec == "operator") {
        if (key == "type") c.op.type = v;
        else if (key == "length") c.op.length = r.real(key, v);
        else if (key == "s") c.op.s = r.real(key, v);
        else if (key == "epsilon") c.op.epsilon = r.real(key, v);
        else if (key == "modes") c.op.modes = r.integer(key, v);
        else c.op.nodes = r.integer(key, v);
    } else if (sec == "source") {
        if (key == "type") c.source.type = v;
        else if (key == "p") c.source.p = r.real(key, v);
        else c.source.q = r.real(key, v);
    } else if (sec == "initial") {
        if (key == "type") c.initial.type = v;
        else if (key == "scale") c.initial.scale = r.real(key, v);
        else if (key == "mode") c.initial.mode = r.integer(key, v);
        else c.initial.path = v;
    } else if (sec == "time") {
        if (key == "T") c.time.T = r.real(key, v);
        else if (key == "steps") c.time.steps = r.integer(key, v);
        else if (key == "mesh") c.time.mesh = v;
        else c.time.grading_r = r.real(key, v);
    } else if (sec == "tolerances") {
        if (key == "fixed_point_tol") c.tol.fixed_point_tol = r.real(key, v);
        else if (key == "max_iters") c.tol.max_iters = r.integer(key, v);
        else c.tol.blowup_threshold = r.real(key, v);
    } else {
        if (key == "dir") c.output.dir = v;
        else c.output.keep_fields = r.boolean(key, v);
    }
}

}  // namespace

int RunConfig::line_of(const std::string& section, const std::string& key) const {
    auto it = lines.find(key.empty() ? section : section + "." + key);
    if (it != lines.end()) return it->second;
    it = lines.find(section);
    return it == lines.end() ? 0 : it->second;
}

RunConfig parse_config(std::istream& in, const std::string& name) {
    RunConfig c;
    c.file = name;
    std::string raw, section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        Reader r{c.file, lineno};
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') r.fail("malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) r.fail("unknown section [" + section + "]");
            if (c.lines.count(section)) r.fail("duplicate section [" + section + "]");
            c.lines[section] = lineno;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) r.fail("expected key = value");
        if (section.empty()) r.fail("key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!schema().at(section).count(key)) r.fail("unknown key '" + key + "' in [" + section + "]");
        if (value.empty()) r.fail(key + ": missing value");
        const std::string id = section + "." + key;
        if (c.lines.count(id)) r.fail("duplicate key '" + key + "'");
        c.lines[id] = lineno;
        assign(c, section, key, value, r);
    }
    if (!c.lines.count("kernel.type")) throw ConfigError(name, c.line_of("kernel"), "[kernel] type is required");
    if (!c.lines.count("source.type")) throw ConfigError(name, c.line_of("source"), "[source] type is required");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    return parse_config(in, path.string());
}

namespace {

// Runs a factory and re-anchors its precondition failures at a config line.
template <class F>
auto anchored(const RunConfig& c, int line, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(c.file, line, e.what());
    }
}

double need(const RunConfig& c, const std::optional<double>& v, const std::string& sec, const std::string& key) {
    if (!v) throw ConfigError(c.file, c.line_of(sec), "[" + sec + "] " + key + " is required for this type");
    return *v;
}

SonineSpec build_kernel(const RunConfig& c) {
    const auto& k = c.kernel;
    const int at = c.line_of("kernel", k.alpha ? "alpha" : "type");
    if (k.type == "dirac") return SonineSpec::dirac();
    if (k.type == "riemann_liouville") {
        const double a = need(c, k.alpha, "kernel", "alpha");
        return anchored(c, at, [&] { return SonineSpec::riemann_liouville(a); });
    }
    if (k.type == "distributed_order") return SonineSpec::distributed_order();
    if (k.type == "tempered") {
        const double a = need(c, k.alpha, "kernel", "alpha");
        const double mu = need(c, k.mu, "kernel", "mu");
        return anchored(c, at, [&] { return SonineSpec::tempered(a, mu); });
    }
    if (k.type == "bessel") {
        const double a = need(c, k.alpha, "kernel", "alpha");
        return anchored(c, at, [&] { return SonineSpec::bessel(a); });
    }
    if (k.type == "mittag_leffler") {
        const double a = need(c, k.alpha, "kernel", "alpha");
        const double b = need(c, k.beta, "kernel", "beta");
        return anchored(c, at, [&] { return SonineSpec::mittag_leffler(a, b); });
    }
    if (k.type == "multi_term") {
        if (k.alphas.empty()) throw ConfigError(c.file, c.line_of("kernel"), "[kernel] alphas is required for multi_term");
        return anchored(c, c.line_of("kernel", "alphas"), [&] { return SonineSpec::multi_term(k.alphas); });
    }
    throw ConfigError(c.file, c.line_of("kernel", "type"), "unknown kernel type '" + k.type + "'");
}

SpectralOperator build_operator(const RunConfig& c) {
    const auto& o = c.op;
    if (o.modes < 1 || o.modes > 4096) throw ConfigError(c.file, c.line_of("operator", "modes"), "modes must be in [1, 4096]");
    if (o.nodes != 0 && o.nodes < o.modes)
        throw ConfigError(c.file, c.line_of("operator", "nodes"), "nodes must be at least modes");
    if (!(o.length > 0.0)) throw ConfigError(c.file, c.line_of("operator", "length"), "length must be positive");
    if (o.type == "dirichlet_laplacian")
        return SpectralOperator::dirichlet_laplacian(o.length, o.modes, o.nodes);
    if (o.type == "fractional_laplacian") {
        const double s = need(c, o.s, "operator", "s");
        return anchored(c, c.line_of("operator", "s"),
                        [&] { return SpectralOperator::fractional_laplacian(o.length, s, o.modes, o.nodes); });
    }
    if (o.type == "involution") {
        const double e = need(c, o.epsilon, "operator", "epsilon");
        if (c.lines.count("operator.length") && o.length != 1.0)
            throw ConfigError(c.file, c.line_of("operator", "length"), "the involution operator lives on (0, 1)");
        return anchored(c, c.line_of("operator", "epsilon"),
                        [&] { return SpectralOperator::involution(e, o.modes, o.nodes); });
    }
    throw ConfigError(c.file, c.line_of("operator", "type"), "unknown operator type '" + o.type + "'");
}

NonlinearSource build_source(const RunConfig& c) {
    const auto& s = c.source;
    if (s.type == "fisher_kpp") return NonlinearSource::fisher_kpp();
    if (s.type == "power_fisher") {
        const double p = need(c, s.p, "source", "p");
        const double q = need(c, s.q, "source", "q");
        return anchored(c, c.line_of("source", "p"), [&] { return NonlinearSource::power_fisher(p, q); });
    }
    if (s.type == "logarithmic") return NonlinearSource::logarithmic();
    if (s.type == "exp_exp") return NonlinearSource::exp_exp();
    if (s.type == "exp_shift") return NonlinearSource::exp_shift();
    if (s.type == "sinh_shift") return NonlinearSource::sinh_shift();
    if (s.type == "tanh_shift") return NonlinearSource::tanh_shift();
    if (s.type == "zero") return NonlinearSource::zero();
    throw ConfigError(c.file, c.line_of("source", "type"), "unknown source type '" + s.type + "'");
}

TimeGrid build_grid(const RunConfig& c) {
    const auto& t = c.time;
    if (!(t.T > 0.0)) throw ConfigError(c.file, c.line_of("time", "T"), "T must be positive");
    if (t.steps < 1 || t.steps > 1000000) throw ConfigError(c.file, c.line_of("time", "steps"), "steps must be in [1, 1e6]");
    if (t.mesh == "uniform") return TimeGrid::uniform(t.T, t.steps);
    if (t.mesh == "graded") {
        if (!(t.grading_r >= 1.0)) throw ConfigError(c.file, c.line_of("time", "grading_r"), "grading_r must be >= 1");
        return TimeGrid::graded(t.T, t.steps, t.grading_r);
    }
    throw ConfigError(c.file, c.line_of("time", "mesh"), "mesh must be uniform or graded");
}

Field build_initial(const RunConfig& c, const SpectralOperator& op) {
    const auto& i = c.initial;
    const int at = c.line_of("initial", "type");
    if (i.type == "eigenfunction" || i.type == "scaled_eigenfunction") {
        if (i.mode < 1 || i.mode > op.n_modes())
            throw ConfigError(c.file, c.line_of("initial", "mode"), "mode must be in [1, modes]");
        std::vector<double> a(op.n_modes(), 0.0);
        // scaled_eigenfunction: scale is int u0 phi_1 with int phi_1 = 1.
        a[i.mode - 1] = i.type == "eigenfunction" ? i.scale : i.scale / unit_integral_phi1_scale(op.length());
        if (i.type == "scaled_eigenfunction" && i.mode != 1)
            throw ConfigError(c.file, c.line_of("initial", "mode"), "scaled_eigenfunction uses the first mode");
        return Field::from_modal(std::move(a));
    }
    if (i.type == "bump") {
        // scale * sin(pi x / L) clamped to [0, 1]
        std::vector<double> v(op.n_nodes());
        for (int j = 0; j < op.n_nodes(); ++j)
            v[j] = std::clamp(i.scale * std::sin(std::numbers::pi * op.nodes()[j] / op.length()), 0.0, 1.0);
        return Field::from_nodal(std::move(v));
    }
    if (i.type == "nodal_file") {
        if (i.path.empty()) throw ConfigError(c.file, at, "nodal_file needs a path");
        std::filesystem::path p(i.path);
        if (p.is_relative()) p = std::filesystem::path(c.file).parent_path() / p;
        std::ifstream in(p);
        if (!in) throw ConfigError(c.file, c.line_of("initial", "path"), "cannot open " + p.string());
        std::vector<double> v;
        double x = 0.0;
        while (in >> x) v.push_back(i.scale * x);
        if (!in.eof()) throw ConfigError(c.file, c.line_of("initial", "path"), "non-numeric data in " + p.string());
        if (static_cast<int>(v.size()) != op.n_nodes())
            throw ConfigError(c.file, c.line_of("initial", "path"),
                              "expected " + std::to_string(op.n_nodes()) + " nodal values, found " + std::to_string(v.size()));
        return Field::from_nodal(std::move(v));
    }
    throw ConfigError(c.file, at, "unknown initial type '" + i.type + "'");
}

}  // namespace

ProblemSpec build_problem(const RunConfig& c) {
    if (!(c.tol.fixed_point_tol > 0.0)) throw ConfigError(c.file, c.line_of("tolerances", "fixed_point_tol"), "must be positive");
    if (c.tol.max_iters < 1) throw ConfigError(c.file, c.line_of("tolerances", "max_iters"), "must be at least 1");
    if (!(c.tol.blowup_threshold >= 1e3))
        throw ConfigError(c.file, c.line_of("tolerances", "blowup_threshold"), "must be at least 1e3");
    SonineSpec kspec = build_kernel(c);
    SpectralOperator op = build_operator(c);
    NonlinearSource src = build_source(c);
    TimeGrid grid = build_grid(c);
    Field u0 = build_initial(c, op);
    return ProblemSpec{make_pair(kspec), std::move(op), std::move(src), std::move(u0), std::move(grid), c.tol,
                       c.output.keep_fields};
}

}  // namespace sonine
