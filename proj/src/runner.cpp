#include "tdeg/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "tdeg/clifford.hpp"
#include "tdeg/cocycle.hpp"
#include "tdeg/geometry.hpp"
#include "tdeg/hardy.hpp"
#include "tdeg/kernels.hpp"
#include "tdeg/permutation.hpp"

namespace tdeg {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string field(const std::string& key) { return "config." + key; }

using Schema = std::vector<std::pair<std::string, std::string>>;

const Schema common_keys = {
    {"seed", "master seed, 64-bit unsigned"},
    {"out", "output path (appends one record per run)"},
    {"format", "json | csv"},
};

const Schema map_keys = {
    {"family", "power | weierstrass | quaternion-power | chart-pullback"},
    {"m", "integer exponent of the map"},
    {"alpha", "Hölder exponent of the Weierstrass perturbation"},
    {"lambda", "perturbation amplitude"},
    {"depth", "Weierstrass series depth"},
};

const Schema integral_keys = {
    {"k", "cocycle order, 2k+1 factors"},
    {"block", "points per factor sphere"},
    {"replicates", "independent block replicates"},
    {"eps", "mollifier schedule, comma separated"},
    {"fit_degree", "extrapolation polynomial degree"},
    {"fit_exponent", "extrapolate in eps^fit_exponent (default 1 for n = 1, 0.5 for n = 2)"},
    {"mollifier", "abel | two-scale"},
};

Schema join(std::initializer_list<Schema> parts)
{
    Schema out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

const std::map<std::string, Schema>& schema_table()
{
    static const std::map<std::string, Schema> table = {
        {"cs-check", join({common_keys,
                           {{"n", "complex dimension, 1..3"},
                            {"symbol", "u | u-tilde | g-tilde"},
                            {"cutoff", "literal | repaired"},
                            {"samples", "Monte-Carlo samples"}}})},
        {"index", join({common_keys, map_keys, integral_keys,
                        {{"n", "complex dimension, 1..2"},
                         {"symbol", "u | composed | scalar"},
                         {"oracle", "also run the truncated-matrix oracle"},
                         {"caps", "oracle degree caps, comma separated"},
                         {"power", "oracle trace power"}}})},
        {"degree", join({common_keys, map_keys, integral_keys,
                         {{"n", "complex dimension, 1..2"},
                          {"samples", "f~ tuples per replicate, 0 disables that path"}}})},
        {"degree-circle", join({common_keys, map_keys,
                                {{"k", "cocycle order"},
                                 {"grid", "points per circle"},
                                 {"eps", "mollifier schedule, comma separated"}}})},
        {"schatten", join({common_keys,
                           {{"n", "1 or 2"},
                            {"model", "holder | trig"},
                            {"alpha", "Hölder exponent of the model symbol"},
                            {"degree", "trig polynomial degree"},
                            {"grid", "circle grid (n = 1)"},
                            {"cap", "holomorphic degree cap (n = 2)"},
                            {"extra", "extra intermediate degrees (n = 2)"}}})},
        {"trace-check", join({common_keys,
                              {{"kernel", "szego | commutator"},
                               {"m", "number of kernels"},
                               {"eps", "mollifier"},
                               {"grid", "quadrature grid"},
                               {"samples", "Monte-Carlo tuples"}}})},
        {"verify-suite", join({common_keys,
                               {{"mutation", "none | parity-flip"},
                                {"tiny_basis", "run the index oracle on a D = 4 basis"},
                                {"samples", "random tuples for the trace expansion oracle"}}})},
    };
    return table;
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    std::istringstream is(text);
    T v{};
    is >> v;
    if (!is || !(is >> std::ws).eof()) throw ConfigError(field(key) + ": cannot parse '" + text + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

json cplx_json(cplx v) { return json::array({v.real(), v.imag()}); }

json estimate_json(const std::string& label, const McEstimate& e)
{
    json j;
    j["label"] = label;
    j["value"] = cplx_json(e.value);
    j["stderr"] = e.std_error;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    j["eps"] = e.eps;
    json per = json::array();
    for (const auto& v : e.per_eps) per.push_back(cplx_json(v));
    j["per_eps"] = per;
    j["extrapolated"] = e.extrapolated;
    return j;
}

// resolution contract plus a unique-integer requirement: 3σ must stay below 1/2
Resolution resolve_unique(const McEstimate& e)
{
    Resolution r = resolve(e.value.real(), e.std_error);
    if (3.0 * e.std_error >= 0.5) r.resolved = false;
    return r;
}

json resolution_json(const Resolution& r)
{
    return {{"resolved", r.resolved}, {"nearest", r.nearest}, {"distance", r.distance}, {"tolerance", r.tolerance}};
}

void set_result(ResultRecord& rec, const Resolution& r)
{
    rec.json["resolution"] = resolution_json(r);
    if (r.resolved)
        rec.json["result"] = r.nearest;
    else
        rec.json["result"] = "UNRESOLVED";
    rec.exit_code = r.resolved ? 0 : 2;
}

TestMap read_map(const ExperimentConfig& c, const std::vector<std::string>& families, const std::string& fallback)
{
    TestMap f;
    const std::string fam = c.get_choice("family", fallback, families);
    if (fam == "power")
        f.family = MapFamily::power;
    else if (fam == "weierstrass")
        f.family = MapFamily::weierstrass;
    else if (fam == "quaternion-power")
        f.family = MapFamily::quaternion_power;
    else
        f.family = MapFamily::chart_pullback;
    f.m = static_cast<int>(c.get_int("m", 1, -8, 8));
    const bool w = f.family == MapFamily::weierstrass;
    f.alpha = w ? c.get_double("alpha", 0.6, 0.05, 1.0) : 1.0;
    f.lambda = w ? c.get_double("lambda", 0.5, 0.0, 10.0) : 0.0;
    f.depth = w ? static_cast<int>(c.get_int("depth", 20, 1, 60)) : 20;
    if (!w)
        for (const char* key : {"alpha", "lambda", "depth"})
            if (c.has(key)) throw ConfigError(field(key) + ": only used by family = weierstrass");
    return f;
}

IndexOptions read_integral(const ExperimentConfig& c, int default_k, int default_block, int default_reps,
                           const std::vector<double>& default_eps, double default_exponent)
{
    IndexOptions o;
    o.k = static_cast<int>(c.get_int("k", default_k, 1, 4));
    o.block = static_cast<int>(c.get_int("block", default_block, 8, 4000));
    o.replicates = static_cast<int>(c.get_int("replicates", default_reps, 2, 256));
    o.eps = c.get_doubles("eps", default_eps, 0.0, 10.0);
    o.fit_degree = static_cast<int>(c.get_int("fit_degree", 2, 0, 4));
    o.fit_exponent = c.get_double("fit_exponent", default_exponent, 0.1, 2.0);
    o.mollifier_order = c.get_choice("mollifier", "abel", {"abel", "two-scale"}) == "abel" ? 1 : 2;
    if (o.eps.size() > 1 && static_cast<int>(o.eps.size()) <= o.fit_degree)
        throw ConfigError(field("fit_degree") + ": needs more eps values than the fit degree");
    o.seed = c.seed();
    return o;
}

SymbolMap scalar_symbol(const TestMap& f)
{
    if (f.domain_n() != 1) throw ConfigError(field("family") + ": scalar symbols need a map S1 -> S1");
    SymbolMap a;
    a.name = f.name();
    a.n = 1;
    a.dim = 1;
    a.eval = [f](const CVec& z) { return CMat(evaluate_test_map(f, z)); };
    a.holder = f.holder_exponent();
    a.unitary = true;
    return a;
}

// --------------------------------------------------------------- subcommands

void run_cs_check(const ExperimentConfig& c, ResultRecord& rec)
{
    const int n = static_cast<int>(c.get_int("n", 2, 1, 3));
    const std::string sym = c.get_choice("symbol", "u", {"u", "u-tilde", "g-tilde"});
    const Cutoff cut = c.get_choice("cutoff", "repaired", {"literal", "repaired"}) == "literal" ? Cutoff::literal
                                                                                               : Cutoff::repaired;
    if (sym == "u" && c.has("cutoff")) throw ConfigError(field("cutoff") + ": not used by symbol = u");
    const auto samples = static_cast<std::size_t>(c.get_int("samples", 1000000, 2, 1000000000));
    const CsSymbol s = sym == "u" ? CsSymbol::u : sym == "u-tilde" ? CsSymbol::u_tilde : CsSymbol::g_smooth;
    const McEstimate e = chern_simons_pairing(s, n, samples, c.seed(), cut);
    rec.json["estimates"] = json::array({estimate_json("cs_integral", e)});
    if (n <= 2) {
        const long ind = spin_symbol_index(n);
        rec.json["oracle"] = {{"spin_index", ind}, {"boutet_de_monvel_value", -ind}};
    }
    set_result(rec, resolve_unique(e));
}

void run_index(const ExperimentConfig& c, ResultRecord& rec)
{
    const int n = static_cast<int>(c.get_int("n", 1, 1, 2));
    const std::string sym = c.get_choice("symbol", n == 1 ? "scalar" : "u", {"u", "composed", "scalar"});
    SymbolMap a;
    if (sym == "u") {
        for (const auto& [key, _] : map_keys)
            if (c.has(key)) throw ConfigError(field(key) + ": not used by symbol = u");
        a = spin_symbol(n);
    } else if (sym == "scalar") {
        if (n != 1) throw ConfigError(field("symbol") + ": scalar symbols live on S1 (n = 1)");
        a = scalar_symbol(read_map(c, {"power", "weierstrass"}, "power"));
    } else {
        a = composed_symbol(read_map(c, {"power", "weierstrass", "quaternion-power", "chart-pullback"},
                                     n == 1 ? "power" : "quaternion-power"),
                            n);
    }
    const IndexOptions o = read_integral(c, n == 1 ? 1 : 2, n == 1 ? 300 : 600, 4,
                                         n == 1 ? std::vector<double>{0.2, 0.1, 0.05, 0.025}
                                                : std::vector<double>{0.05, 0.025, 0.0125, 0.00625},
                                         n == 1 ? 1.0 : 0.5);
    const bool oracle = c.get_bool("oracle", true);
    const auto caps = c.get_ints("caps", n == 1 ? std::vector<int>{64, 96, 128} : std::vector<int>{12, 14, 16}, 2,
                                 n == 1 ? 256 : 40);
    const int power = static_cast<int>(c.get_int("power", 5, 1, 15));
    if (!oracle)
        for (const char* key : {"caps", "power"})
            if (c.has(key)) throw ConfigError(field(key) + ": only used when oracle = true");

    const McEstimate e = index_integral(a, o);
    rec.json["symbol"] = a.name;
    rec.json["estimates"] = json::array({estimate_json("index_integral", e)});
    const Resolution r = resolve_unique(e);
    if (oracle) {
        json oj;
        try {
            const IndexReport rep = fredholm_index_truncated(a, caps, power);
            oj = {{"index", rep.index}, {"caps", rep.caps}, {"traces", rep.traces}, {"imag_parts", rep.imag_parts}};
            oj["agrees"] = r.resolved && r.nearest == rep.index;
        } catch (const InconclusiveError& ex) {
            oj = {{"index", "INCONCLUSIVE"}, {"message", ex.what()}};
        }
        rec.json["oracle"] = oj;
    }
    set_result(rec, r);
}

void run_degree(const ExperimentConfig& c, ResultRecord& rec)
{
    const int n = static_cast<int>(c.get_int("n", 2, 1, 2));
    const TestMap f = read_map(c, {"power", "weierstrass", "quaternion-power", "chart-pullback"},
                               n == 1 ? "power" : "quaternion-power");
    const IndexOptions o = read_integral(c, n == 1 ? 1 : 2, n == 1 ? 300 : 800, n == 1 ? 4 : 16,
                                         n == 1 ? std::vector<double>{0.2, 0.1, 0.05, 0.025}
                                                : std::vector<double>{0.05, 0.025, 0.0125, 0.00625},
                                         n == 1 ? 1.0 : 0.5);
    const auto samples = static_cast<std::size_t>(c.get_int("samples", n == 1 ? 100000 : 300000, 0, 100000000));
    rec.json["map"] = f.name();
    rec.json["true_degree"] = f.true_degree();
    if (samples == 0) {
        const McEstimate e = index_integral(composed_symbol(f, n), o);
        const long spin = spin_symbol_index(n);
        McEstimate d = e;
        d.value *= static_cast<double>(spin);
        for (auto& v : d.per_eps) v *= static_cast<double>(spin);
        rec.json["oracle"] = {{"spin_index", spin}};
        rec.json["estimates"] = json::array({estimate_json("via_index", d)});
        set_result(rec, resolve_unique(d));
        return;
    }
    const DegreeResult d = degree_integral(f, n, o, samples);
    rec.json["oracle"] = {{"spin_index", d.spin_index}};
    rec.json["estimates"] =
        json::array({estimate_json("via_index", d.via_index), estimate_json("via_ftilde", d.via_ftilde)});
    const Resolution a = resolve_unique(d.via_index);
    const Resolution b = resolve_unique(d.via_ftilde);
    rec.json["paths"] = {{"via_index", resolution_json(a)}, {"via_ftilde", resolution_json(b)}};
    Resolution r = a;
    r.resolved = a.resolved && b.resolved && a.nearest == b.nearest;
    set_result(rec, r);
}

void run_degree_circle(const ExperimentConfig& c, ResultRecord& rec)
{
    const TestMap f = read_map(c, {"power", "weierstrass"}, "power");
    CircleOptions o;
    o.k = static_cast<int>(c.get_int("k", 1, 1, 3));
    o.grid = static_cast<int>(c.get_int("grid", 200, 16, 2000));
    o.eps = c.get_doubles("eps", {0.0}, 0.0, 10.0);
    McEstimate e = degree_circle(f, o);
    e.seed = c.seed();
    rec.json["map"] = f.name();
    rec.json["true_degree"] = f.true_degree();
    rec.json["estimates"] = json::array({estimate_json("degree", e)});
    set_result(rec, resolve_unique(e));
}

void run_schatten(const ExperimentConfig& c, ResultRecord& rec)
{
    const int n = static_cast<int>(c.get_int("n", 1, 1, 2));
    const std::string model = c.get_choice("model", "holder", {"holder", "trig"});
    const double alpha = model == "holder" ? c.get_double("alpha", 0.5, 0.05, 1.0) : 1.0;
    const int degree = model == "trig" ? static_cast<int>(c.get_int("degree", 3, 1, 64)) : 0;
    if (model == "trig" && n != 1) throw ConfigError(field("model") + ": trig model is on S1 (n = 1)");
    if (model == "trig" && c.has("alpha")) throw ConfigError(field("alpha") + ": not used by model = trig");
    if (model == "holder" && c.has("degree")) throw ConfigError(field("degree") + ": only used by model = trig");
    const double p_crit = 2.0 * n / alpha;
    const std::vector<double> ps{0.5 * p_crit, 1.25 * p_crit};
    SingularValueReport rep;
    json extra;
    if (n == 1) {
        for (const char* key : {"cap", "extra"})
            if (c.has(key)) throw ConfigError(field(key) + ": only used for n = 2");
        const int grid = static_cast<int>(c.get_int("grid", 2048, 256, 8192));
        std::function<cplx(double)> a;
        if (model == "holder")
            a = [alpha](double th) { return cplx(std::pow(std::abs(std::polar(1.0, th) - 1.0), alpha)); };
        else
            a = [degree](double th) {
                cplx s = 0.0;
                for (int j = -degree; j <= degree; ++j) s += std::polar(1.0 / (1.0 + std::abs(j)), j * th);
                return s;
            };
        rep = commutator_singular_values_circle(a, alpha, grid, ps);
        extra["grid"] = grid;
    } else {
        if (c.has("grid")) throw ConfigError(field("grid") + ": only used for n = 1");
        const int cap = static_cast<int>(c.get_int("cap", 16, 4, 24));
        const int ext = static_cast<int>(c.get_int("extra", 14, 2, 24));
        const auto a = [alpha](const CVec& z) { return cplx(std::pow(std::abs(z(0) - 1.0), alpha)); };
        rep = commutator_singular_values_sphere(a, alpha, cap, ext, ps);
        extra["cap"] = cap;
    }
    const int rank = rep.rank(1e-8);
    json j = extra;
    j["slope"] = rep.slope;
    j["fit_range"] = {rep.fit_first, rep.fit_last};
    j["numerical_rank"] = rank;
    j["size"] = rep.s.size();
    j["leading"] = std::vector<double>(rep.s.begin(), rep.s.begin() + std::min<std::size_t>(8, rep.s.size()));
    json sums = json::array();
    for (const auto& [p, v] : rep.partial_sums) sums.push_back({{"p", p}, {"sum", v}});
    j["partial_sums"] = sums;
    bool pass = false;
    if (model == "holder") {
        const double bound = -alpha / (2.0 * n) + 0.1;
        j["slope_bound"] = bound;
        pass = rep.slope <= bound;
    } else {
        j["expected_rank"] = 2 * degree;
        pass = rank == 2 * degree;
    }
    j["pass"] = pass;
    rec.json["report"] = j;
    rec.json["result"] = pass ? "PASS" : "FAIL";
    rec.exit_code = pass ? 0 : 2;
}

void run_trace_check(const ExperimentConfig& c, ResultRecord& rec)
{
    const std::string kind = c.get_choice("kernel", "szego", {"szego", "commutator"});
    const int m = static_cast<int>(c.get_int("m", 3, 1, 8));
    const double eps = c.get_double("eps", 0.1, 1e-3, 10.0);
    const int grid = static_cast<int>(c.get_int("grid", 512, 16, 4096));
    const auto samples = static_cast<std::size_t>(c.get_int("samples", 1000000, 0, 100000000));
    const double r = 1.0 / (1.0 + eps);
    CircleKernel k;
    if (kind == "szego")
        k = [r](double x, double y) { return 1.0 / (1.0 - r * std::polar(1.0, x - y)); };
    else
        k = [r](double x, double y) {
            return (1.0 - std::polar(1.0, y - x)) / (1.0 - r * std::polar(1.0, x - y));
        };
    const std::vector<CircleKernel> ks(static_cast<std::size_t>(m), k);
    const cplx matrix_side = trace_product_matrix(ks, grid);
    const cplx integral_side = trace_product_grid(ks, grid);
    json j;
    j["matrix_side"] = cplx_json(matrix_side);
    j["integral_side"] = cplx_json(integral_side);
    const double rel = std::abs(matrix_side - integral_side) / std::max(1e-300, std::abs(matrix_side));
    j["relative_difference"] = rel;
    bool pass = rel < 0.01;
    if (kind == "szego") {
        const cplx exact = 1.0 / (1.0 - std::pow(r, m));
        j["closed_form"] = cplx_json(exact);
        j["closed_form_relative_difference"] = std::abs(matrix_side - exact) / std::abs(exact);
    }
    if (samples > 0) {
        const McEstimate e = trace_product_mc(ks, samples, c.seed());
        rec.json["estimates"] = json::array({estimate_json("integral_side_mc", e)});
        const double rel_mc = std::abs(e.value - matrix_side) / std::abs(matrix_side);
        j["mc_relative_difference"] = rel_mc;
        pass = pass && std::abs(e.value - matrix_side) < std::max(4.0 * e.std_error, 0.01 * std::abs(matrix_side));
    }
    j["pass"] = pass;
    rec.json["report"] = j;
    rec.json["result"] = pass ? "PASS" : "FAIL";
    rec.exit_code = pass ? 0 : 2;
}

// --------------------------------------------------------------- verify-suite

struct Check {
    std::string name;
    std::string status;  // pass | fail | inconclusive
    double margin = 0.0;
    std::string detail;
};

Check check_le(const std::string& name, double measured, double tol, std::string detail = {})
{
    return {name, measured <= tol ? "pass" : "fail", measured, std::move(detail)};
}

std::vector<Check> suite(const ExperimentConfig& c)
{
    const bool flip = c.get_choice("mutation", "none", {"none", "parity-flip"}) == "parity-flip";
    const bool tiny = c.get_bool("tiny_basis", false);
    const auto tuples = static_cast<std::size_t>(c.get_int("samples", 1000, 1, 100000));
    const std::uint64_t seed = c.seed();
    std::vector<Check> out;

    double rel = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const GeneratorSet g = build_generators(n);
        const CMat id = CMat::Identity(g.dim(), g.dim());
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double delta = j == k ? 2.0 : 0.0;
                rel = std::max(rel, (g.e_plus[j] * g.e_plus[k] + g.e_plus[k] * g.e_plus[j]).norm());
                rel = std::max(rel, (g.e_minus[j] * g.e_minus[k] + g.e_minus[k] * g.e_minus[j]).norm());
                rel = std::max(rel, (g.e_plus[j] * g.e_minus[k] + g.e_minus[k] * g.e_plus[j] + delta * id).norm());
            }
    }
    out.push_back(check_le("generator_relations", rel, 1e-12));

    double unit = 0.0, qerr = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const GeneratorSet g = build_generators(n);
        const CMat pts = sample_block(n, 1000, derive_seed(seed, "suite-unitary", static_cast<std::uint64_t>(n)));
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            const CVec z = pts.row(i).transpose();
            const CliffordOp u = symbol_u(g, z);
            unit = std::max(unit, (u.matrix.adjoint() * u.matrix - CMat::Identity(g.half_dim(), g.half_dim()))
                                      .cwiseAbs()
                                      .maxCoeff());
            if (n >= 2) qerr = std::max(qerr, (q_of(u) - iota(z, g.half_dim())).cwiseAbs().maxCoeff());
        }
    }
    out.push_back(check_le("unitarity", unit, 1e-10));
    out.push_back(check_le("q_of_u_equals_iota", qerr, 1e-10));

    double dk = 0.0;
    for (int k = 0; k <= 5; ++k) {
        const PairingConstants pc = pairing_constants(k);
        dk = std::max(dk, std::abs(pc.d * pc.c + 1.0));
    }
    out.push_back(check_le("pairing_constants_product", dk, 1e-12));

    {
        const GeneratorSet g = build_generators(2);
        double worst = 0.0;
        for (std::size_t t = 0; t < tuples; ++t) {
            const int m = t % 2 ? 5 : 3;
            const CMat pts = sample_block(2, static_cast<std::size_t>(m), derive_seed(seed, "suite-nsch", t));
            std::vector<CVec> zs;
            for (Eigen::Index i = 0; i < pts.rows(); ++i) zs.push_back(pts.row(i).transpose());
            worst = std::max(worst, nsch_trace(g, zs, ExpansionMethod::matchings, flip).difference);
        }
        out.push_back(check_le("trace_expansion_oracle", worst, 1e-9, flip ? "parity sign flipped" : ""));
    }

    {
        const double r = 1.0 / 1.1;
        const CircleKernel k = [r](double x, double y) { return 1.0 / (1.0 - r * std::polar(1.0, x - y)); };
        const std::vector<CircleKernel> ks(3, k);
        const cplx a = trace_product_matrix(ks, 256), b = trace_product_grid(ks, 256);
        out.push_back(check_le("trace_product_agreement", std::abs(a - b) / std::abs(a), 0.01));
    }

    {
        const auto a = [](double th) { return cplx(std::sqrt(std::abs(std::polar(1.0, th) - 1.0))); };
        const SingularValueReport rep = commutator_singular_values_circle(a, 0.5, 2048);
        out.push_back(check_le("schatten_slope_circle", rep.slope, -0.25 + 0.1));
        const auto trig = [](double th) { return std::polar(1.0, 2.0 * th) + 0.5 * std::polar(1.0, -2.0 * th); };
        const SingularValueReport t = commutator_singular_values_circle(trig, 1.0, 512);
        out.push_back(check_le("schatten_trig_rank", std::abs(t.rank(1e-8) - 4), 0.0, "expected rank 4"));
    }

    const auto index_check = [&](const std::string& name, const SymbolMap& a, const std::vector<int>& caps,
                                 long expected) {
        try {
            const IndexReport rep = fredholm_index_truncated(a, caps, 5);
            const double dist = std::abs(rep.traces.back() - static_cast<double>(expected));
            Check ch{name, rep.index == expected ? "pass" : "fail", dist,
                     "index " + std::to_string(rep.index) + ", expected " + std::to_string(expected)};
            out.push_back(ch);
        } catch (const InconclusiveError& e) {
            out.push_back({name, "inconclusive", 0.0, e.what()});
        }
    };
    SymbolMap z;
    z.name = "z";
    z.n = 1;
    z.dim = 1;
    z.eval = [](const CVec& v) { return CMat(v); };
    z.holder = 1.0;
    z.unitary = true;
    if (tiny) {
        index_check("index_oracle_z_tiny_basis", z, {2, 3, 4}, -1);
        index_check("index_oracle_u_tiny_basis", spin_symbol(2), {2, 3, 4}, 1);
        TestMap id;
        id.family = MapFamily::quaternion_power;
        index_check("index_oracle_g_of_id_tiny_basis", composed_symbol(id, 2), {2, 3, 4}, 1);
    } else {
        index_check("index_oracle_z", z, {16, 24, 32}, -1);
        index_check("index_oracle_u", spin_symbol(2), {8, 10, 12}, 1);
    }
    return out;
}

void run_verify_suite(const ExperimentConfig& c, ResultRecord& rec)
{
    const auto checks = suite(c);
    json arr = json::array();
    bool all = true;
    for (const auto& ch : checks) {
        arr.push_back({{"name", ch.name}, {"status", ch.status}, {"margin", ch.margin}, {"detail", ch.detail}});
        all = all && ch.status == "pass";
    }
    rec.json["checks"] = arr;
    rec.json["result"] = all ? "PASS" : "FAIL";
    rec.exit_code = all ? 0 : 2;
}

}  // namespace

// --------------------------------------------------------------- config

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& origin)
{
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.values.count(key) || (key == "subcommand" && !cfg.subcommand.empty()))
            throw ConfigError(field(key) + ": duplicate key (" + origin + ":" + std::to_string(lineno) + ")");
        if (key == "subcommand")
            cfg.subcommand = value;
        else
            cfg.values[key] = value;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) { values[key] = value; }

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names = {"cs-check",    "index",    "degree",      "degree-circle",
                                                   "schatten",    "trace-check", "verify-suite"};
    return names;
}

std::vector<std::pair<std::string, std::string>> config_schema(const std::string& subcommand)
{
    const auto& t = schema_table();
    const auto it = t.find(subcommand);
    if (it == t.end()) throw ConfigError("config.subcommand: unknown subcommand '" + subcommand + "'");
    return it->second;
}

void ExperimentConfig::validate() const
{
    const auto schema = config_schema(subcommand);
    std::set<std::string> all;
    for (const auto& [_, s] : schema_table())
        for (const auto& [k, __] : s) all.insert(k);
    for (const auto& [key, _] : values) {
        if (!all.count(key)) throw ConfigError(field(key) + ": unknown key");
        const bool ok = std::any_of(schema.begin(), schema.end(), [&](const auto& e) { return e.first == key; });
        if (!ok) throw ConfigError(field(key) + ": not used by subcommand " + subcommand);
    }
}

long ExperimentConfig::get_int(const std::string& key, long fallback, long lo, long hi) const
{
    long v = fallback;
    if (has(key)) v = parse_number<long>(key, values.at(key));
    if (v < lo || v > hi)
        throw ConfigError(field(key) + ": " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    return v;
}

double ExperimentConfig::get_double(const std::string& key, double fallback, double lo, double hi) const
{
    double v = fallback;
    if (has(key)) v = parse_number<double>(key, values.at(key));
    if (!(v >= lo && v <= hi)) {
        std::ostringstream os;
        os << field(key) << ": " << v << " outside [" << lo << ", " << hi << "]";
        throw ConfigError(os.str());
    }
    return v;
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const
{
    if (!has(key)) return fallback;
    const std::string& v = values.at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(field(key) + ": expected true or false, got '" + v + "'");
}

std::string ExperimentConfig::get_choice(const std::string& key, const std::string& fallback,
                                         const std::vector<std::string>& choices) const
{
    const std::string v = has(key) ? values.at(key) : fallback;
    if (std::find(choices.begin(), choices.end(), v) == choices.end()) {
        std::string list;
        for (const auto& ch : choices) list += (list.empty() ? "" : " | ") + ch;
        throw ConfigError(field(key) + ": '" + v + "' is not one of " + list);
    }
    return v;
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key, const std::vector<double>& fallback,
                                                  double lo, double hi) const
{
    std::vector<double> out = fallback;
    if (has(key)) {
        out.clear();
        for (const auto& item : split_list(values.at(key))) out.push_back(parse_number<double>(key, item));
    }
    if (out.empty()) throw ConfigError(field(key) + ": empty list");
    for (double v : out)
        if (!(v >= lo && v <= hi)) throw ConfigError(field(key) + ": entry out of range");
    return out;
}

std::vector<int> ExperimentConfig::get_ints(const std::string& key, const std::vector<int>& fallback, int lo,
                                            int hi) const
{
    std::vector<int> out = fallback;
    if (has(key)) {
        out.clear();
        for (const auto& item : split_list(values.at(key))) out.push_back(parse_number<int>(key, item));
    }
    if (out.empty()) throw ConfigError(field(key) + ": empty list");
    for (int v : out)
        if (v < lo || v > hi)
            throw ConfigError(field(key) + ": entry " + std::to_string(v) + " outside [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
    return out;
}

std::uint64_t ExperimentConfig::seed() const
{
    if (!has("seed")) return 1;
    const std::string& v = values.at("seed");
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(field("seed") + ": expected an unsigned integer");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ConfigError(field("seed") + ": out of range");
    }
}

// --------------------------------------------------------------- run / output

ResultRecord run(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.has("format")) cfg.get_choice("format", "json", {"json", "csv"});
    ResultRecord rec;
    rec.json["version"] = artifact_version;
    rec.json["subcommand"] = cfg.subcommand;
    json echo;
    echo["subcommand"] = cfg.subcommand;
    for (const auto& [k, v] : cfg.values)
        if (k != "out" && k != "format") echo[k] = v;
    echo["seed"] = std::to_string(cfg.seed());
    rec.json["config"] = echo;
    const auto t0 = std::chrono::steady_clock::now();
    const std::string& s = cfg.subcommand;
    if (s == "cs-check")
        run_cs_check(cfg, rec);
    else if (s == "index")
        run_index(cfg, rec);
    else if (s == "degree")
        run_degree(cfg, rec);
    else if (s == "degree-circle")
        run_degree_circle(cfg, rec);
    else if (s == "schatten")
        run_schatten(cfg, rec);
    else if (s == "trace-check")
        run_trace_check(cfg, rec);
    else
        run_verify_suite(cfg, rec);
    rec.json["workers"] = worker_count();
    rec.json["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::string format_record(const ResultRecord& rec, OutputFormat fmt, bool header)
{
    if (fmt == OutputFormat::json) return rec.json.dump() + "\n";
    std::ostringstream os;
    os << std::setprecision(17);
    if (header) os << "subcommand,label,value_re,value_im,stderr,samples,seed,result\n";
    const std::string result =
        rec.json["result"].is_string() ? rec.json["result"].get<std::string>() : rec.json["result"].dump();
    const std::string seed = rec.json["config"]["seed"].get<std::string>();
    const auto& ests = rec.json.contains("estimates") ? rec.json["estimates"] : json::array();
    if (ests.empty()) os << rec.json["subcommand"].get<std::string>() << ",,,,,," << seed << "," << result << "\n";
    for (const auto& e : ests)
        os << rec.json["subcommand"].get<std::string>() << "," << e["label"].get<std::string>() << ","
           << e["value"][0].get<double>() << "," << e["value"][1].get<double>() << "," << e["stderr"].get<double>()
           << "," << e["samples"].get<std::size_t>() << "," << e["seed"].get<std::uint64_t>() << "," << result
           << "\n";
    return os.str();
}

void emit_record(const ResultRecord& rec, OutputFormat fmt, const std::string& path, std::ostream& fallback)
{
    if (path.empty()) {
        fallback << format_record(rec, fmt, true);
        return;
    }
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw ConfigError("config.out: cannot open " + path);
    out << format_record(rec, fmt, fresh);
}

nlohmann::ordered_json numeric_fields(const nlohmann::ordered_json& record)
{
    nlohmann::ordered_json j = record;
    j.erase("wall_clock_s");
    j.erase("workers");
    return j;
}

}  // namespace tdeg
