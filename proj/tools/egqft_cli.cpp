// egqft command-line front end.
// Exit codes: 0 success, 1 domain error, 2 usage error.
#include "egqft/adiabatic_limits.hpp"
#include "egqft/causal_splitting.hpp"
#include "egqft/model_registry.hpp"
#include "egqft/numerics.hpp"
#include "egqft/power_counting.hpp"
#include "egqft/propagators.hpp"
#include "egqft/wick_pairing.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace egq;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

// Options shared by every subcommand.
struct Common {
    std::string model = "scalar_model";
    std::string format;
    std::string manifest;
    std::string out;
    int c_override = -1;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--model", c.model, "builtin model name or path to a model file")->capture_default_str();
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
    sub->add_option("--manifest", c.manifest, "write a run manifest (JSON) to this path");
    sub->add_option("--out", c.out, "write output to this path instead of stdout");
    sub->add_option("--c", c.c_override, "override the model's c constant (0 or 1)")->check(CLI::Range(0, 1));
}

ModelSpec load(const Common& c) {
    ModelSpec m = load_model(c.model);
    if (c.c_override >= 0) m = with_c(m, c.c_override);
    return m;
}

// Output sink: stdout or the --out file.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void write_manifest(const Common& c, const std::string& subcommand, const ModelSpec* model, const json& params, double secs) {
    if (c.manifest.empty()) return;
    json m;
    m["subcommand"] = subcommand;
    const std::string model_hash = model ? hex(fnv1a(serialize_model_spec(*model))) : "";
    if (model)
        m["model"] = {{"name", model->name}, {"hash", model_hash}, {"c", model->c_const}};
    else
        m["model"] = {{"name", nullptr}, {"hash", nullptr}};
    m["parameters"] = params;
    // identity of the run: equal run hashes mean equal inputs
    m["run_hash"] = hex(fnv1a(subcommand + "|" + model_hash + "|" + c.format + "|" + params.dump()));
    m["format"] = c.format;
    m["tool_version"] = kVersion;
    m["threads"] = worker_threads();
    m["wall_time_s"] = secs;
    std::ofstream f(c.manifest);
    if (!f) throw UsageError("cannot open manifest file '" + c.manifest + "'");
    f << m.dump(2) << "\n";
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) parts.push_back(cur);
    return parts;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// "d[0]d[1]phi" -> Generator
Generator parse_generator(const std::string& text, const FieldTable& ft) {
    std::string rest = trim(text);
    MultiIndex alpha{0, 0, 0, 0};
    while (rest.rfind("d[", 0) == 0) {
        const auto close = rest.find(']');
        if (close == std::string::npos || close != 3 || rest[2] < '0' || rest[2] > '3')
            throw UsageError("bad derivative prefix in '" + text + "'; use d[0] .. d[3]");
        ++alpha[static_cast<std::size_t>(rest[2] - '0')];
        rest = rest.substr(4);
    }
    auto id = ft.find(rest);
    if (!id) throw UsageError("unknown field '" + rest + "'");
    return Generator{*id, alpha};
}

// slots separated by ',', generators in a slot by '*'
SList parse_slist(const std::string& text, const FieldTable& ft) {
    SList out;
    for (auto& slot : split(text, ',')) {
        SuperQuadriIndex s;
        for (auto& g : split(slot, '*')) s.add(parse_generator(g, ft), 1);
        out.push_back(s);
    }
    return out;
}

std::map<std::string, int> parse_counts(const std::string& text) {
    std::map<std::string, int> out;
    for (auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("expected name=count, got '" + item + "'");
        try {
            out[trim(item.substr(0, eq))] = std::stoi(item.substr(eq + 1));
        } catch (const std::logic_error&) {
            throw UsageError("bad count in '" + item + "'");
        }
    }
    return out;
}

json slist_json(const SList& s, const FieldTable& ft) {
    json a = json::array();
    for (auto& x : s) a.push_back(to_string(x, ft));
    return a;
}

std::string join(const json& arr, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < arr.size(); ++i) out += (i ? sep : "") + arr[i].get<std::string>();
    return out;
}

std::string momentum_poly_string(const MomentumPoly& p) {
    static const char* names[] = {"k0", "k1", "k2", "k3"};
    std::string out;
    for (auto& [mono, c] : p) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c) + ")";
        for (std::size_t mu = 0; mu < 4; ++mu)
            for (int k = 0; k < mono.k_power[mu]; ++k) out += "*" + std::string(names[mu]);
        for (int k = 0; k < mono.m_power; ++k) out += "*m";
    }
    return out.empty() ? "0" : out;
}

json limit_json(const LimitReport& r) {
    json j;
    j["estimate"] = {r.estimate.real(), r.estimate.imag()};
    j["converged"] = r.converged;
    j["log_slope"] = r.log_slope;
    j["slope_sigma"] = r.slope_sigma;
    j["confidence_width"] = r.confidence_width;
    j["slope_significant"] = r.slope_significant;
    j["tolerance"] = r.tolerance;
    j["diagnostics"] = r.diagnostics;
    json s = json::array();
    for (auto& x : r.samples) s.push_back({x.eps, x.value.real(), x.value.imag()});
    j["samples"] = s;
    return j;
}

std::vector<double> parse_grid(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("--q2grid expects a:b:n");
    double a, b;
    int n;
    try {
        a = std::stod(parts[0]);
        b = std::stod(parts[1]);
        n = std::stoi(parts[2]);
    } catch (const std::logic_error&) {
        throw UsageError("--q2grid expects numbers a:b:n");
    }
    if (n < 1) throw UsageError("--q2grid needs n >= 1");
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return g;
}

double first_massive(const ModelSpec& m) {
    for (auto& f : m.fields.fields)
        if (f.qn.mass > 0) return f.qn.mass;
    throw DomainError("model '" + m.name + "' has no massive field for the self-energy");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"egqft: causal perturbation theory toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // classify
    Common c_classify;
    auto* classify_cmd = app.add_subcommand("classify", "power-counting class and adiabatic-limit eligibility\n"
                                                        "csv columns: model,c,class,wal_eligible,reasons");
    add_common(classify_cmd, c_classify, "text");

    // subpolys
    Common c_sub;
    std::string view = "multiplet";
    auto* sub_cmd = app.add_subcommand("subpolys", "sub-polynomials of the first vertex\ncsv columns: index,s,dim,poly");
    add_common(sub_cmd, c_sub, "text");
    sub_cmd->add_option("--view", view, "all | distinct | multiplet")->check(CLI::IsMember({"all", "distinct", "multiplet"}))->capture_default_str();

    // omega
    Common c_omega;
    std::string ext_text, der_text, u_text;
    auto* omega_cmd = app.add_subcommand("omega", "power-counting index of a VEV\ncsv columns: omega,vanishing_sector");
    add_common(omega_cmd, c_omega, "text");
    omega_cmd->add_option("--ext", ext_text, "external counts per multiplet, e.g. phi=2,psi=0");
    omega_cmd->add_option("--der", der_text, "derivative counts per multiplet");
    omega_cmd->add_option("--u", u_text, "u-list: slots separated by ',', generators by '*', e.g. 'phi,psi*psi'");

    // wick
    Common c_wick;
    int wick_order = 2;
    bool nonzero_only = false;
    auto* wick_cmd = app.add_subcommand("wick", "causal Wick expansion of T(L,...,L), one term per line\n"
                                                "csv columns: index,s_list,sign,weight,vev,normal,forced_zero");
    add_common(wick_cmd, c_wick, "json");
    wick_cmd->add_option("--order", wick_order, "number of vertex copies")->check(CLI::Range(1, 4))->capture_default_str();
    wick_cmd->add_flag("--nonzero", nonzero_only, "drop terms whose VEV vanishes by field content");

    // pairings
    Common c_pair;
    std::string left_text, right_text;
    bool all_subsets = false, force = false;
    auto* pair_cmd = app.add_subcommand("pairings", "complete pairings between two sub-index lists, one term per line\n"
                                                    "csv columns: index,pairs,constant,class,residual_left,residual_right");
    add_common(pair_cmd, c_pair, "json");
    pair_cmd->add_option("--left", left_text, "left list, e.g. 'psi*psi'")->required();
    pair_cmd->add_option("--right", right_text, "right list")->required();
    pair_cmd->add_flag("--all-subsets", all_subsets, "sum over all admissible partial pairings");
    pair_cmd->add_flag("--force", force, "lift the factorial blow-up guard");

    // selfenergy
    Common c_se;
    std::string grid = "-4:12:17", nsub_text = "central", prescription = "feynman";
    int se_omega = 2;
    double q0_sign = 1.0;
    auto* se_cmd = app.add_subcommand("selfenergy", "one-loop bubble by a subtracted dispersion integral\n"
                                                    "csv columns: q2,re_sigma,im_sigma");
    add_common(se_cmd, c_se, "csv");
    se_cmd->add_option("--q2grid", grid, "a:b:n grid in q^2")->capture_default_str();
    se_cmd->add_option("--nsub", nsub_text, "number of subtractions or 'central'")->capture_default_str();
    se_cmd->add_option("--omega", se_omega, "power-counting index used by central normalization")->capture_default_str();
    se_cmd->add_option("--prescription", prescription, "feynman | advanced | retarded")
        ->check(CLI::IsMember({"feynman", "advanced", "retarded"}))->capture_default_str();
    se_cmd->add_option("--q0-sign", q0_sign, "sign of q0 for advanced/retarded")->capture_default_str();

    // adiabatic
    Common c_ad;
    double cmis = 0.0, asymmetry = 0.5;
    std::string family = "gauss", profile = "flat";
    auto* ad_cmd = app.add_subcommand("adiabatic", "second-order advanced/retarded products at zero momentum\n"
                                                   "csv columns: report,eps,re,im");
    add_common(ad_cmd, c_ad, "json");
    ad_cmd->add_option("--cmis", cmis, "constant missing from the normalization")->capture_default_str();
    ad_cmd->add_option("--family", family, "test family")->check(CLI::IsMember({"gauss"}))->capture_default_str();
    ad_cmd->add_option("--profile", profile, "flat | vanishing")->check(CLI::IsMember({"flat", "vanishing"}))->capture_default_str();
    ad_cmd->add_option("--asymmetry", asymmetry, "odd admixture in the test profile")->capture_default_str();

    // glcheck
    Common c_gl;
    int gl_order = 2, gl_nsub = -1;
    double shift = 0.0;
    auto* gl_cmd = app.add_subcommand("glcheck", "Gell-Mann and Low versus adiabatic limit at second order\n"
                                                 "csv columns: eps,re_difference,im_difference");
    add_common(gl_cmd, c_gl, "csv");
    gl_cmd->add_option("--order", gl_order, "0 or 2")->capture_default_str();
    gl_cmd->add_option("--nsub", gl_nsub, "subtractions; -1 for central")->capture_default_str();
    gl_cmd->add_option("--shift", shift, "constant added to the self-energy")->capture_default_str();

    // sdestimate
    Common c_sd;
    std::string probe = "delta";
    int sd_dim = 4;
    auto* sd_cmd = app.add_subcommand("sdestimate", "scaling degree of delta or its derivative\n"
                                                    "csv columns: probe,dim,value,fit_residual,indeterminate");
    add_common(sd_cmd, c_sd, "text");
    sd_cmd->add_option("--probe", probe, "delta | ddelta")->check(CLI::IsMember({"delta", "ddelta"}))->capture_default_str();
    sd_cmd->add_option("--dim", sd_dim, "space-time dimension")->check(CLI::Range(1, 8))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    try {
        if (*classify_cmd) {
            const Common& c = c_classify;
            const ModelSpec m = load(c);
            const ModelVerdict v = validate(m);
            Sink sink(c.out);
            const std::string cls = to_string(v.renormalizability);
            if (c.format == "json") {
                json j{{"model", m.name}, {"c", m.c_const}, {"class", cls}, {"wal_eligible", v.wal_eligible}, {"reasons", v.reasons}};
                sink.os() << j.dump() << "\n";
            } else if (c.format == "csv") {
                std::string reasons;
                for (auto& r : v.reasons) reasons += (reasons.empty() ? "" : "; ") + r;
                sink.os() << "model,c,class,wal_eligible,reasons\n"
                          << csv_escape(m.name) << "," << m.c_const << "," << cls << "," << (v.wal_eligible ? 1 : 0) << ","
                          << csv_escape(reasons) << "\n";
            } else {
                sink.os() << cls << "; " << (v.wal_eligible ? "wAL-eligible" : "not wAL-eligible") << "\n";
                for (auto& r : v.reasons) std::cerr << "note: " << r << "\n";
            }
            write_manifest(c, "classify", &m, json::object(), elapsed());
        } else if (*sub_cmd) {
            const Common& c = c_sub;
            const ModelSpec m = load(c);
            if (m.vertices.empty()) throw DomainError("model '" + m.name + "' has no vertex");
            const SubpolyView sv = view == "all" ? SubpolyView::all
                                   : view == "distinct" ? SubpolyView::distinct_up_to_constant
                                                        : SubpolyView::by_multiplet;
            const auto subs = subpolynomials(m.vertices[0].poly, m.fields, sv);
            Sink sink(c.out);
            if (c.format == "csv") sink.os() << "index,s,dim,poly\n";
            for (std::size_t i = 0; i < subs.size(); ++i) {
                const std::string s = to_string(subs[i].s, m.fields), p = to_string(subs[i].poly, m.fields);
                const std::string dim = to_string(canonical_dim(subs[i].poly, m.fields));
                if (c.format == "json")
                    sink.os() << json{{"index", i}, {"s", s}, {"dim", dim}, {"poly", p}}.dump() << "\n";
                else if (c.format == "csv")
                    sink.os() << i << "," << csv_escape(s) << "," << dim << "," << csv_escape(p) << "\n";
                else
                    sink.os() << i << "\t" << s << "\tdim " << dim << "\t" << p << "\n";
            }
            write_manifest(c, "subpolys", &m, {{"view", view}}, elapsed());
        } else if (*omega_cmd) {
            const Common& c = c_omega;
            const ModelSpec m = load(c);
            if (u_text.empty() == ext_text.empty()) throw UsageError("give exactly one of --ext or --u");
            const Omega w = u_text.empty() ? omega_from_counts(m, parse_counts(ext_text), parse_counts(der_text))
                                           : omega_massless(m, parse_slist(u_text, m.fields));
            Sink sink(c.out);
            const std::string value = w.vanishing_sector() ? to_string(w.raw) : std::to_string(w.value());
            if (c.format == "json")
                sink.os() << json{{"omega", value}, {"vanishing_sector", w.vanishing_sector()}}.dump() << "\n";
            else if (c.format == "csv")
                sink.os() << "omega,vanishing_sector\n" << value << "," << (w.vanishing_sector() ? 1 : 0) << "\n";
            else
                sink.os() << (w.vanishing_sector() ? value + " (vanishing sector)" : value) << "\n";
            write_manifest(c, "omega", &m, {{"ext", ext_text}, {"der", der_text}, {"u", u_text}}, elapsed());
        } else if (*wick_cmd) {
            const Common& c = c_wick;
            const ModelSpec m = load(c);
            if (m.vertices.empty()) throw DomainError("model '" + m.name + "' has no vertex");
            const auto terms = wick_expand(std::vector<Polynomial>(static_cast<std::size_t>(wick_order), m.vertices[0].poly), m.fields);
            Sink sink(c.out);
            if (c.format == "csv") sink.os() << "index,s_list,sign,weight,vev,normal,forced_zero\n";
            std::size_t index = 0;
            for (auto& t : terms) {
                if (nonzero_only && t.vev_forced_zero) continue;
                json normal = json::array();
                for (auto& a : t.normal_monomials) normal.push_back(to_string(a, m.fields));
                const json sl = slist_json(t.s_list, m.fields);
                const std::string vev = vev_key(t, m.fields);
                if (c.format == "csv")
                    sink.os() << index << "," << csv_escape(join(sl, "; ")) << "," << t.sign << "," << to_string(t.weight) << ","
                              << csv_escape(vev) << "," << csv_escape(join(normal, "; ")) << "," << (t.vev_forced_zero ? 1 : 0) << "\n";
                else
                    sink.os() << json{{"index", index}, {"s_list", sl}, {"sign", t.sign}, {"weight", to_string(t.weight)},
                                      {"vev", vev}, {"normal", normal}, {"forced_zero", t.vev_forced_zero}}.dump()
                              << "\n";
                ++index;
            }
            write_manifest(c, "wick", &m, {{"order", wick_order}, {"nonzero", nonzero_only}}, elapsed());
        } else if (*pair_cmd) {
            const Common& c = c_pair;
            const ModelSpec m = load(c);
            PairingOptions opts;
            opts.mode = all_subsets ? PairingMode::all_subsets : PairingMode::full;
            opts.force = force;
            const auto terms = complete_pairings(parse_slist(left_text, m.fields), parse_slist(right_text, m.fields), m, opts);
            Sink sink(c.out);
            if (c.format == "csv") sink.os() << "index,pairs,constant,class,residual_left,residual_right\n";
            std::size_t index = 0;
            for (auto& t : terms) {
                json pairs = json::array();
                for (std::size_t k = 0; k < t.pairs.size(); ++k) {
                    const auto& [l, r] = t.pairs[k];
                    pairs.push_back({{"left_slot", l.slot}, {"left", to_string(l.gen, m.fields)},
                                     {"right_slot", r.slot}, {"right", to_string(r.gen, m.fields)},
                                     {"kind", to_string(t.two_points[k].kind)},
                                     {"prefactor", momentum_poly_string(t.two_points[k].prefactor)}});
                }
                const json rl = slist_json(t.residual_left, m.fields), rr = slist_json(t.residual_right, m.fields);
                if (c.format == "csv") {
                    std::string ps;
                    for (auto& p : pairs)
                        ps += (ps.empty() ? "" : "; ") + p["left"].get<std::string>() + "-" + p["right"].get<std::string>();
                    sink.os() << index << "," << csv_escape(ps) << "," << csv_escape(to_string(t.constant)) << ","
                              << to_string(t.classification) << "," << csv_escape(join(rl, "; ")) << ","
                              << csv_escape(join(rr, "; ")) << "\n";
                } else {
                    sink.os() << json{{"index", index}, {"pairs", pairs}, {"constant", to_string(t.constant)},
                                      {"class", to_string(t.classification)}, {"residual_left", rl}, {"residual_right", rr}}.dump()
                              << "\n";
                }
                ++index;
            }
            write_manifest(c, "pairings", &m, {{"left", left_text}, {"right", right_text}, {"all_subsets", all_subsets}, {"force", force}},
                           elapsed());
        } else if (*se_cmd) {
            const Common& c = c_se;
            const ModelSpec m = load(c);
            const double mass = first_massive(m);
            SelfEnergy se(bubble_density(mass, mass), 1);
            if (nsub_text == "central") {
                se = central_normalize(se, se_omega);
            } else {
                int n;
                try {
                    n = std::stoi(nsub_text);
                } catch (const std::logic_error&) {
                    throw UsageError("--nsub expects an integer or 'central'");
                }
                if (n < 0) throw UsageError("--nsub must be nonnegative");
                se = se.with_n_sub(n);
            }
            const Prescription pr = prescription == "advanced" ? Prescription::advanced
                                    : prescription == "retarded" ? Prescription::retarded
                                                                 : Prescription::feynman;
            const auto q2s = parse_grid(grid);
            std::vector<std::complex<double>> vals(q2s.size());
            parallel_for(q2s.size(), [&](std::size_t i) { vals[i] = dispersion_eval(se, q2s[i], pr, q0_sign); });
            Sink sink(c.out);
            sink.os().precision(17);
            if (c.format == "json") {
                for (std::size_t i = 0; i < q2s.size(); ++i)
                    sink.os() << json{{"q2", q2s[i]}, {"re_sigma", vals[i].real()}, {"im_sigma", vals[i].imag()}}.dump() << "\n";
            } else {
                sink.os() << "q2,re_sigma,im_sigma\n";
                for (std::size_t i = 0; i < q2s.size(); ++i) sink.os() << q2s[i] << "," << vals[i].real() << "," << vals[i].imag() << "\n";
            }
            write_manifest(c, "selfenergy", &m,
                           {{"q2grid", grid}, {"n_sub", se.n_sub()}, {"omega", se_omega}, {"prescription", prescription}, {"q0_sign", q0_sign},
                            {"mass", mass}},
                           elapsed());
        } else if (*ad_cmd) {
            const Common& c = c_ad;
            const ModelSpec m = load(c);
            AppendixCOptions opts;
            opts.c_mis = cmis;
            opts.asymmetry = asymmetry;
            opts.profile = profile == "flat" ? SwitchProfile::flat : SwitchProfile::vanishing_at_0;
            const AppendixCResult r = appendix_c_demo(m, opts);
            Sink sink(c.out);
            sink.os().precision(17);
            if (c.format == "csv") {
                sink.os() << "report,eps,re,im\n";
                for (auto& [name, rep] : {std::pair{"advanced", &r.advanced}, std::pair{"retarded", &r.retarded}, std::pair{"difference", &r.difference}})
                    for (auto& s : rep->samples) sink.os() << name << "," << s.eps << "," << s.value.real() << "," << s.value.imag() << "\n";
            } else {
                json j{{"advanced", limit_json(r.advanced)}, {"retarded", limit_json(r.retarded)},
                       {"difference", limit_json(r.difference)}, {"expected_slope", r.expected_slope}};
                sink.os() << j.dump(c.format == "text" ? 2 : -1) << "\n";
            }
            write_manifest(c, "adiabatic", &m, {{"cmis", cmis}, {"family", family}, {"profile", profile}, {"asymmetry", asymmetry}}, elapsed());
        } else if (*gl_cmd) {
            const Common& c = c_gl;
            const ModelSpec m = load(c);
            GlVsEgOptions opts;
            opts.order = gl_order;
            opts.n_sub = gl_nsub;
            opts.constant_shift = shift;
            const DecayReport r = gl_vs_eg_second_order(m, opts);
            for (auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
            Sink sink(c.out);
            sink.os().precision(17);
            if (c.format == "csv") {
                sink.os() << "eps,re_difference,im_difference\n";
                for (std::size_t i = 0; i < r.eps.size(); ++i)
                    sink.os() << r.eps[i] << "," << r.difference[i].real() << "," << r.difference[i].imag() << "\n";
            } else {
                json d = json::array();
                for (std::size_t i = 0; i < r.eps.size(); ++i) d.push_back({r.eps[i], r.difference[i].real(), r.difference[i].imag()});
                json j{{"exponent", std::isfinite(r.exponent) ? json(r.exponent) : json("inf")},
                       {"exponent_sigma", r.exponent_sigma}, {"normalized", r.normalized}, {"warnings", r.warnings}, {"samples", d}};
                sink.os() << j.dump(c.format == "text" ? 2 : -1) << "\n";
            }
            write_manifest(c, "glcheck", &m, {{"order", gl_order}, {"n_sub", gl_nsub}, {"shift", shift}}, elapsed());
        } else if (*sd_cmd) {
            const Common& c = c_sd;
            const ScalingDegree d = scaling_degree_estimate(probe == "delta" ? delta_probe(sd_dim) : derivative_delta_probe(sd_dim), sd_dim);
            Sink sink(c.out);
            if (c.format == "json")
                sink.os() << json{{"probe", probe}, {"dim", sd_dim}, {"value", d.value}, {"fit_residual", d.fit_residual},
                                  {"indeterminate", d.indeterminate}, {"diagnostics", d.diagnostics}}.dump()
                          << "\n";
            else if (c.format == "csv")
                sink.os() << "probe,dim,value,fit_residual,indeterminate\n"
                          << probe << "," << sd_dim << "," << d.value << "," << d.fit_residual << "," << (d.indeterminate ? 1 : 0) << "\n";
            else
                sink.os() << d.value << (d.indeterminate ? " (indeterminate: " + d.diagnostics + ")" : "") << "\n";
            write_manifest(c, "sdestimate", nullptr, {{"probe", probe}, {"dim", sd_dim}}, elapsed());
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "model file error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
