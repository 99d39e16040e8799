#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "perc/enumeration.hpp"
#include "perc/interfaces.hpp"
#include "perc/json_io.hpp"
#include "perc/percolation.hpp"
#include "perc/presentation.hpp"
#include "perc/series.hpp"
#include "perc/suites.hpp"

using namespace perc;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;

// Records every option of a subcommand so the emitted RunSpec is complete.
class Params {
public:
    template <class T>
    CLI::Option* add(CLI::App* app, const std::string& name, T& ref, const std::string& help) {
        entries_.push_back({name, [&ref] { return Json(ref); }});
        return app->add_option("--" + name, ref, help)->capture_default_str();
    }
    CLI::Option* flag(CLI::App* app, const std::string& name, bool& ref, const std::string& help) {
        entries_.push_back({name, [&ref] { return Json(ref); }});
        return app->add_flag("--" + name, ref, help);
    }
    Json json() const {
        Json j = Json::object();
        for (const auto& [name, get] : entries_) j[name] = get();
        return j;
    }

private:
    std::vector<std::pair<std::string, std::function<Json()>>> entries_;
};

struct Options {
    // lattice
    std::string lattice = "square";
    int radius = 10;
    int d = 3;
    int depth = 10;
    std::string presentation;
    std::string mode = "bond";
    // sampling
    double p = 0.5;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 1;
    std::uint64_t sample = 0;
    std::size_t threads = 0;
    std::size_t cap = 0;
    // long-range model
    std::string model = "uniform";
    std::size_t vertices = 3;
    std::string mu = "1";
    double t = 1.0;
    // per-command
    std::size_t n = 3;
    std::size_t m = 2;
    std::size_t k = 12;
    std::size_t m_max = 20;
    std::size_t k_max = 12;
    std::size_t boundary_cap = 12;
    std::string p_exact = "1/2";
    std::string origin = "0";
    std::string which = "p";
    std::string method = "formula";
    std::string points;
    std::string interface_file;
    double x = 0.5;
    double disc_radius = 0.5;
    std::size_t disc_points = 256;
    double r_min = -1.0;
    double r_max = -0.005;
    double r_step = 0.01;
    bool list = false;
    bool occurrence = false;
    // suites
    std::uint64_t configs = 10'000;
    std::uint64_t cube_configs = 1'000;
    int cube_radius = 8;
    std::uint64_t shapes = 1'000;
    // output
    std::string output;
};

struct Command {
    std::string name;  // "group command"
    CLI::App* app = nullptr;
    Params params;
    std::function<int(const RunSpec&)> run;
};

Mode parse_mode(const std::string& s) {
    if (s == "bond") return Mode::bond;
    if (s == "site") return Mode::site;
    throw InvalidArgument("mode must be bond or site");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PatchPtr make_patch(const Options& o) {
    if (o.radius < 1) throw InvalidArgument("radius must be positive");
    if (o.lattice == "square") return build_square_patch(o.radius);
    if (o.lattice == "triangular") return build_triangular_patch(o.radius);
    if (o.lattice == "tree") return build_tree_patch(o.d, o.depth);
    if (o.lattice == "path") return build_half_line_patch(o.radius);
    if (o.lattice == "cayley") {
        Presentation pres = o.presentation.empty() ? Presentation::free_abelian(o.d)
                                                   : parse_presentation_json(read_file(o.presentation));
        return build_cayley_patch(pres, o.radius);
    }
    throw InvalidArgument("unknown lattice '" + o.lattice + "'");
}

LongRangeModel make_model(const Options& o) {
    mpq_class mu = parse_rational(o.mu);
    if (o.model == "uniform") return LongRangeModel::uniform(o.vertices, mu);
    if (o.model == "path") return LongRangeModel::path(o.vertices, mu);
    if (o.model == "asym") return asymmetric_model(o.vertices);
    throw InvalidArgument("unknown model '" + o.model + "'");
}

std::size_t cap_of(const Options& o) { return o.cap != 0 ? o.cap : enumeration_cap(0); }

class Emitter {
public:
    explicit Emitter(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::app);
            if (!file_) throw InvalidArgument("cannot open output " + path);
        }
    }
    void emit(const RunSpec& spec, Json result) {
        Json record{{"spec", to_json(spec)}, {"result", std::move(result)}};
        (file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout) << record.dump() << '\n';
    }

private:
    std::ofstream file_;
};

Json estimate_record(const Estimate& e) { return to_json(e); }

Json shape_list(const LatticePatch& patch, const std::vector<ClusterShape>& shapes) {
    Json out = Json::array();
    for (const auto& s : shapes) {
        Json v = Json::array();
        for (VertexId u : s.vertices) v.push_back(patch.coords(u));
        out.push_back(Json{{"vertices", v}, {"edges", s.edges.size()}, {"boundary", s.boundary_size}});
    }
    return out;
}

std::vector<VertexId> parse_points(const LatticePatch& patch, const std::string& text) {
    // "x,y;x,y" in lattice coordinates
    std::vector<VertexId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        std::vector<int> coords;
        std::stringstream cs(item);
        std::string c;
        while (std::getline(cs, c, ',')) coords.push_back(std::stoi(c));
        auto v = patch.find_vertex(coords);
        if (!v) throw InvalidArgument("point '" + item + "' is not in the patch");
        out.push_back(*v);
    }
    if (out.empty()) throw InvalidArgument("--points needs at least one point");
    return out;
}

Json suite_json(const SuiteResult& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return Json{{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

void print_table(const SuiteResult& r) {
    for (const auto& c : r.checks)
        std::cout << (c.passed ? "PASS  " : "FAIL  ") << r.suite << ": " << c.name
                  << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Percolation analyticity toolkit"};
    app.require_subcommand(1);
    Options o;
    std::vector<std::unique_ptr<Command>> commands;
    std::unique_ptr<Emitter> emitter;

    auto group = [&](const std::string& name, const std::string& help) {
        auto* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        return g;
    };
    auto command = [&](CLI::App* g, const std::string& name, const std::string& help) -> Command& {
        auto cmd = std::make_unique<Command>();
        cmd->name = g->get_name() + " " + name;
        cmd->app = g->add_subcommand(name, help);
        cmd->params.add(cmd->app, "output", o.output, "append JSON-lines records to this file");
        commands.push_back(std::move(cmd));
        return *commands.back();
    };
    auto lattice_opts = [&](Command& c) {
        c.params.add(c.app, "lattice", o.lattice, "square|triangular|tree|path|cayley");
        c.params.add(c.app, "radius", o.radius, "patch radius (path length for --lattice path)");
        c.params.add(c.app, "d", o.d, "tree branching degree, or rank of Z^d for cayley");
        c.params.add(c.app, "depth", o.depth, "tree depth");
        c.params.add(c.app, "presentation", o.presentation, "group presentation JSON for cayley");
    };
    auto sampling_opts = [&](Command& c) {
        c.params.add(c.app, "mode", o.mode, "bond|site");
        c.params.add(c.app, "p", o.p, "occupation probability");
        c.params.add(c.app, "samples", o.samples, "number of configurations");
        c.params.add(c.app, "seed", o.seed, "random seed");
        c.params.add(c.app, "threads", o.threads, "worker threads (0 = all cores)");
    };
    auto config_opts = [&](Command& c) {
        c.params.add(c.app, "p", o.p, "occupation probability");
        c.params.add(c.app, "seed", o.seed, "random seed");
        c.params.add(c.app, "sample", o.sample, "sample index within the seed stream");
    };
    auto model_opts = [&](Command& c) {
        c.params.add(c.app, "model", o.model, "uniform|path|asym");
        c.params.add(c.app, "vertices", o.vertices, "number of model vertices");
        c.params.add(c.app, "mu", o.mu, "pair weight (rational)");
    };
    auto cap_opt = [&](Command& c) { c.params.add(c.app, "cap", o.cap, "enumeration cap (0 = default or PERC_CAP)"); };

    // ---- simulate ----
    auto* sim = group("simulate", "Monte Carlo estimators");
    {
        auto& c = command(sim, "theta", "Pr(o connects to the patch boundary)");
        lattice_opts(c);
        sampling_opts(c);
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            emitter->emit(spec, estimate_record(estimate_theta(patch, parse_mode(o.mode), o.p, o.samples, o.seed, {o.threads})));
            return 0;
        };
    }
    {
        auto& c = command(sim, "chi", "E|C(o)| with boundary-touching clusters counted at their size");
        lattice_opts(c);
        sampling_opts(c);
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            emitter->emit(spec, estimate_record(estimate_chi_truncated(patch, parse_mode(o.mode), o.p, o.samples, o.seed, {o.threads})));
            return 0;
        };
    }
    {
        auto& c = command(sim, "tau", "connection probability of o to a set of points");
        lattice_opts(c);
        sampling_opts(c);
        c.params.add(c.app, "points", o.points, "target points as 'x,y;x,y'")->required();
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            auto targets = parse_points(*patch, o.points);
            auto r = estimate_tau(patch, parse_mode(o.mode), targets, o.p, o.samples, o.seed, {o.threads});
            emitter->emit(spec, Json{{"tau", to_json(r.tau)}, {"tau_f", to_json(r.tau_f)}});
            return 0;
        };
    }
    {
        auto& c = command(sim, "tail", "Pr(m <= |C(o)| < infinity)");
        lattice_opts(c);
        sampling_opts(c);
        c.params.add(c.app, "m", o.m, "cluster size threshold");
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            emitter->emit(spec, estimate_record(tail_probability(patch, parse_mode(o.mode), o.p, o.m, o.samples, o.seed, {o.threads})));
            return 0;
        };
    }

    // ---- enumerate ----
    auto* en = group("enumerate", "exact enumeration");
    {
        auto& c = command(en, "clusters", "connected clusters of o with n vertices");
        lattice_opts(c);
        c.params.add(c.app, "n", o.n, "cluster size");
        c.params.flag(c.app, "list", o.list, "include every shape");
        cap_opt(c);
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            auto shapes = enumerate_clusters(*patch, patch->origin(), o.n, cap_of(o));
            ShapeSum sum;
            for (const auto& s : shapes) sum.add(s.edge_count(), s.boundary_size);
            Json r{{"n", o.n}, {"count", shapes.size()}, {"polynomial", to_json(sum)}};
            if (o.list) r["shapes"] = shape_list(*patch, shapes);
            emitter->emit(spec, r);
            return 0;
        };
    }
    {
        auto& c = command(en, "pn", "exact P_n(p) = Pr(|C(o)| = n)");
        lattice_opts(c);
        c.params.add(c.app, "n", o.n, "cluster size");
        cap_opt(c);
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            ShapeSum sum = cluster_size_polynomial(*patch, patch->origin(), o.n, cap_of(o));
            emitter->emit(spec, Json{{"n", o.n}, {"polynomial", sum.to_string()}, {"expanded", to_json(sum.expand())}});
            return 0;
        };
    }
    {
        auto& c = command(en, "partitions", "integer partitions p(n)");
        c.params.add(c.app, "n", o.n, "argument");
        c.run = [&](const RunSpec& spec) {
            const auto n = static_cast<unsigned>(o.n);
            mpz_class pn = count_partitions(n);
            Json r{{"n", n}, {"count", pn.get_str()}, {"hardy_ramanujan_ratio", hardy_ramanujan_ratio(n)}};
            if (n > 0) {
                long exp = 0;
                double mant = mpz_get_d_2exp(&exp, pn.get_mpz_t());
                r["nth_root"] = std::exp((std::log(mant) + exp * std::log(2.0)) / n);
            }
            emitter->emit(spec, r);
            return 0;
        };
    }
    {
        auto& c = command(en, "tree-animals", "subtrees of the d-regular tree containing the root");
        c.params.add(c.app, "d", o.d, "degree");
        c.params.add(c.app, "n", o.n, "number of vertices");
        c.params.add(c.app, "method", o.method, "formula|brute");
        cap_opt(c);
        c.run = [&](const RunSpec& spec) {
            AnimalMethod method;
            if (o.method == "formula")
                method = AnimalMethod::formula;
            else if (o.method == "brute")
                method = AnimalMethod::brute;
            else
                throw InvalidArgument("method must be formula or brute");
            mpz_class count = count_tree_animals(static_cast<unsigned>(o.d), static_cast<unsigned>(o.n), method, cap_of(o));
            emitter->emit(spec, Json{{"d", o.d}, {"n", o.n}, {"count", count.get_str()}});
            return 0;
        };
    }

    // ---- interfaces ----
    auto* in = group("interfaces", "interfaces of sampled configurations");
    auto sampled = [&](const PatchPtr& patch) { return sample_config(patch, Mode::bond, o.p, o.seed, o.sample); };
    {
        auto& c = command(in, "extract", "planar interface of the finite cluster of o");
        lattice_opts(c);
        config_opts(c);
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            Config config = sampled(patch);
            Cluster cl = cluster_of(config, patch->origin());
            Json r{{"finite", !cl.touches_escape}, {"cluster_size", cl.vertices.size()}};
            if (!cl.touches_escape) {
                PlanarInterface s = extract_planar_interface(config, cl);
                r["interface"] = to_json(*patch, s);
                r["occurs"] = interface_occurs(config, s);
            }
            emitter->emit(spec, r);
            return 0;
        };
    }
    {
        auto& c = command(in, "multi", "occurring multi-interfaces around o");
        lattice_opts(c);
        config_opts(c);
        c.params.add(c.app, "boundary-cap", o.boundary_cap, "largest |dM| listed");
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            Config config = sampled(patch);
            DualPatch dual = dual_patch(patch);
            Json list = Json::array();
            for (const auto& mi : occurring_multi_interfaces(config, o.boundary_cap)) {
                Json parts = Json::array();
                for (const auto& s : mi.parts) parts.push_back(to_json(*patch, s));
                list.push_back(Json{{"count", mi.count()},
                                    {"boundary_size", mi.boundary_size()},
                                    {"inner_size", mi.inner_size()},
                                    {"sign", mi.sign()},
                                    {"dual_components", dual_boundary_components(dual, mi)},
                                    {"parts", parts}});
            }
            emitter->emit(spec, Json{{"multi_interfaces", list}});
            return 0;
        };
    }
    {
        auto& c = command(in, "pextract", "P-interface of the finite cluster of o");
        lattice_opts(c);
        config_opts(c);
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            Config config = sampled(patch);
            Cluster cl = cluster_of(config, patch->origin());
            Json r{{"finite", !cl.touches_escape}, {"cluster_size", cl.vertices.size()}};
            if (!cl.touches_escape) {
                PInterface pi = extract_p_interface(config, cl);
                r["interface"] = to_json(*patch, pi);
                r["verification"] = to_json(verify_p_interface(*patch, pi, patch->origin(), &config));
            }
            emitter->emit(spec, r);
            return 0;
        };
    }
    {
        auto& c = command(in, "verify", "check a P-interface candidate read from JSON");
        lattice_opts(c);
        config_opts(c);
        c.params.add(c.app, "interface", o.interface_file, "JSON with i_v and i_o edge lists")->required();
        c.params.flag(c.app, "occurrence", o.occurrence, "also check occurrence in the sampled configuration");
        c.run = [&](const RunSpec& spec) {
            auto patch = make_patch(o);
            Json j;
            try {
                j = Json::parse(read_file(o.interface_file));
            } catch (const Json::parse_error& e) {
                throw InvalidArgument(std::string("interface file: ") + e.what());
            }
            if (j.contains("interface")) j = j["interface"];
            if (!j.contains("i_v") || !j.contains("i_o")) throw InvalidArgument("interface file needs i_v and i_o");
            PInterface pi;
            pi.i_v = edges_from_json(*patch, j["i_v"]);
            pi.i_o = edges_from_json(*patch, j["i_o"]);
            std::sort(pi.i_v.begin(), pi.i_v.end());
            std::sort(pi.i_o.begin(), pi.i_o.end());
            std::optional<Config> config;
            if (o.occurrence) config = sampled(patch);
            auto report = verify_p_interface(*patch, pi, patch->origin(), config ? &*config : nullptr);
            emitter->emit(spec, to_json(report));
            return report.valid ? 0 : kExitFailure;
        };
    }

    // ---- series ----
    auto* se = group("series", "exact series and analytic checks");
    {
        auto& c = command(se, "theta-series", "inclusion-exclusion partial sums for 1 - theta on Z^2");
        c.params.add(c.app, "radius", o.radius, "square patch radius");
        c.params.add(c.app, "p", o.p, "occupation probability");
        c.params.add(c.app, "n-max", o.boundary_cap, "largest boundary size N");
        cap_opt(c);
        c.run = [&](const RunSpec& spec) {
            auto patch = build_square_patch(o.radius);
            ThetaSeries ts = theta_series_planar(*patch, o.p, o.boundary_cap, cap_of(o));
            Json rows = Json::array();
            for (std::size_t i = 0; i < ts.caps.size(); ++i)
                rows.push_back(Json{{"N", ts.caps[i]},
                                    {"ring", ts.rings[i].to_string()},
                                    {"ring_magnitude", ts.ring_magnitude[i]},
                                    {"multi_interfaces", ts.multi_counts[i]},
                                    {"partial_sum", ts.partial[i]},
                                    {"theta", ts.theta[i]}});
            emitter->emit(spec, Json{{"interfaces", ts.interface_count}, {"rows", rows}});
            return 0;
        };
    }
    {
        auto& c = command(se, "chi-series", "partial sums of sum_m m Pr(|C(o)| = m)");
        c.params.add(c.app, "lattice", o.lattice, "square|triangular|tree|path, or 'model' for long-range");
        c.params.add(c.app, "radius", o.radius, "patch radius");
        c.params.add(c.app, "d", o.d, "tree degree");
        c.params.add(c.app, "depth", o.depth, "tree depth");
        c.params.add(c.app, "p-exact", o.p_exact, "rational p for lattices");
        model_opts(c);
        c.params.add(c.app, "t", o.t, "long-range parameter");
        c.params.add(c.app, "m-max", o.m_max, "largest cluster size");
        cap_opt(c);
        c.run = [&](const RunSpec& spec) {
            ChiSeries cs;
            Json r = Json::object();
            if (o.lattice == "model") {
                cs = chi_series(make_model(o), o.t, o.m_max, cap_of(o));
            } else {
                auto patch = make_patch(o);
                cs = chi_series(*patch, parse_rational(o.p_exact), o.m_max, cap_of(o));
                Json ex = Json::array();
                for (const auto& q : cs.exact) ex.push_back(perc::to_string(q));
                r["exact"] = ex;
            }
            r["partial"] = cs.partial;
            emitter->emit(spec, r);
            return 0;
        };
    }
    {
        auto& c = command(se, "tree-theta", "percolation probability on the d-regular tree");
        c.params.add(c.app, "d", o.d, "degree");
        c.params.add(c.app, "p-exact", o.p_exact, "occupation probability (rational)");
        c.run = [&](const RunSpec& spec) {
            mpq_class p = parse_rational(o.p_exact);
            TreeTheta tt = tree_theta(static_cast<unsigned>(o.d), p.get_d());
            Json r{{"theta_rooted", tt.theta_rooted}, {"theta", tt.theta}};
            if (o.d == 3 && p > mpq_class(1, 2) && p <= 1) {
                auto [rooted, theta] = tree_theta_exact_d3(p);
                r["theta_rooted_exact"] = perc::to_string(rooted);
                r["theta_exact"] = perc::to_string(theta);
            }
            emitter->emit(spec, r);
            return 0;
        };
    }
    {
        auto& c = command(se, "maclaurin", "Taylor coefficients of p_m or f_m of a long-range model");
        model_opts(c);
        c.params.add(c.app, "m", o.m, "cluster size");
        c.params.add(c.app, "which", o.which, "p|f");
        c.params.add(c.app, "k", o.k, "highest coefficient index");
        c.params.add(c.app, "origin", o.origin, "expansion point (rational)");
        cap_opt(c);
        c.run = [&](const RunSpec& spec) {
            auto model = make_model(o);
            ExpSum f;
            if (o.which == "p")
                f = pm_expsum(model, o.m, cap_of(o));
            else if (o.which == "f")
                f = fm_expsum(model, o.m, cap_of(o));
            else
                throw InvalidArgument("which must be p or f");
            auto slice = maclaurin(f, o.k, parse_rational(o.origin));
            const int eps = static_cast<int>(o.m + 1);
            auto bad = slice.alternation_violation(eps);
            emitter->emit(spec, Json{{"function", to_json(f)},
                                     {"slice", to_json(slice)},
                                     {"zero_order", slice.zero_order()},
                                     {"alternates", !bad.has_value()}});
            return 0;
        };
    }
    {
        auto& c = command(se, "neg-threshold", "t_1 for the one-way path with weight mu");
        c.params.add(c.app, "mu", o.mu, "edge weight (rational)");
        c.params.add(c.app, "m-max", o.m_max, "largest cluster size in the fit");
        c.params.add(c.app, "r-min", o.r_min, "grid start");
        c.params.add(c.app, "r-max", o.r_max, "grid end (negative)");
        c.params.add(c.app, "r-step", o.r_step, "grid step");
        c.run = [&](const RunSpec& spec) {
            if (o.r_step <= 0 || o.r_min >= o.r_max || o.r_max >= 0)
                throw InvalidArgument("need r-min < r-max < 0 and r-step > 0");
            auto path = LongRangeModel::path(o.m_max + 2, parse_rational(o.mu));
            std::vector<double> grid;
            for (std::size_t i = 0;; ++i) {
                double r = o.r_min + static_cast<double>(i) * o.r_step;
                if (r > o.r_max + 1e-12) break;
                grid.push_back(r);
            }
            auto nt = negative_threshold([&](std::size_t m) { return pm_expsum(path, m); }, grid, o.m_max);
            Json rows = Json::array();
            for (const auto& row : nt.grid) rows.push_back(Json{{"r", row.r}, {"rate", row.rate}, {"chi_rate", row.chi_rate}});
            emitter->emit(spec, Json{{"t1", nt.t1},
                                     {"t1_chi", nt.t1_chi},
                                     {"monotonicity_violations", nt.monotonicity_violations},
                                     {"diagnostics", nt.diagnostics},
                                     {"grid", rows}});
            return 0;
        };
    }
    {
        auto& c = command(se, "disc-bound", "disc bound and maximum modulus for p_m of a long-range model");
        model_opts(c);
        c.params.add(c.app, "m", o.m, "cluster size");
        c.params.add(c.app, "x", o.x, "disc centre (real, >= 0)");
        c.params.add(c.app, "M", o.disc_radius, "disc radius");
        c.params.add(c.app, "points", o.disc_points, "sampled boundary points");
        cap_opt(c);
        c.run = [&](const RunSpec& spec) {
            auto model = make_model(o);
            ExpSum pm = pm_expsum(model, o.m, cap_of(o));
            DiscCheck dc = pm_disc_check(pm, o.m, o.x, o.disc_radius, o.disc_points);
            Json r{{"sampled_sup", dc.sampled_sup}, {"bound", dc.bound}, {"holds", dc.holds()}};
            try {
                DiscMaximum dm = max_modulus_disc(pm, o.disc_radius, o.disc_points);
                r["max_modulus_at_zero"] = Json{{"value", dm.value}, {"sampled_sup", dm.sampled_sup}};
            } catch (const InvalidArgument& e) {
                r["max_modulus_at_zero"] = e.what();
            }
            emitter->emit(spec, r);
            return 0;
        };
    }

    // ---- verify ----
    auto* ve = group("verify", "invariant suites; prints a PASS/FAIL table");
    auto run_suites = [&](const RunSpec& spec, bool alt, bool uniq, bool bounds) {
        std::vector<SuiteResult> results;
        if (alt) {
            AlternationOptions ao;
            ao.max_vertices = o.vertices;
            ao.m_max = o.m_max;
            ao.k_max = o.k_max;
            results.push_back(alternation_suite(ao));
        }
        if (uniq) {
            UniquenessOptions uo;
            uo.radius = o.radius;
            uo.planar_samples = o.configs;
            uo.cube_radius = o.cube_radius;
            uo.cube_samples = o.cube_configs;
            uo.seed = o.seed;
            results.push_back(uniqueness_suite(uo));
        }
        if (bounds) {
            BoundsOptions bo;
            bo.shapes = o.shapes;
            bo.seed = o.seed;
            results.push_back(bounds_suite(bo));
        }
        bool ok = true;
        Json suites = Json::array();
        for (const auto& r : results) {
            print_table(r);
            ok = ok && r.passed();
            suites.push_back(suite_json(r));
        }
        std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
        if (!o.output.empty()) emitter->emit(spec, Json{{"passed", ok}, {"suites", suites}});
        return ok ? 0 : kExitFailure;
    };
    auto alt_opts = [&](Command& c) {
        c.params.add(c.app, "vertices", o.vertices, "largest model size");
        c.params.add(c.app, "m-max", o.m_max, "largest cluster size");
        c.params.add(c.app, "k-max", o.k_max, "highest Taylor coefficient");
    };
    auto uniq_opts = [&](Command& c) {
        c.params.add(c.app, "radius", o.radius, "square patch radius");
        c.params.add(c.app, "configs", o.configs, "configurations per p on Z^2");
        c.params.add(c.app, "cube-radius", o.cube_radius, "Z^3 patch radius");
        c.params.add(c.app, "cube-configs", o.cube_configs, "configurations per p on Z^3");
        c.params.add(c.app, "seed", o.seed, "random seed");
    };
    auto bounds_opts = [&](Command& c) { c.params.add(c.app, "shapes", o.shapes, "random shapes and discs"); };
    {
        auto& c = command(ve, "alternation", "sign patterns of Taylor coefficients of p_m and f_m");
        alt_opts(c);
        c.run = [&](const RunSpec& spec) { return run_suites(spec, true, false, false); };
    }
    {
        auto& c = command(ve, "uniqueness", "interface uniqueness and boundary-size lemmas");
        uniq_opts(c);
        c.run = [&](const RunSpec& spec) { return run_suites(spec, false, true, false); };
    }
    {
        auto& c = command(ve, "bounds", "disc bounds, Peierls constants, animal counts");
        bounds_opts(c);
        c.params.add(c.app, "seed", o.seed, "random seed");
        c.run = [&](const RunSpec& spec) { return run_suites(spec, false, false, true); };
    }
    {
        auto& c = command(ve, "all", "every suite");
        alt_opts(c);
        uniq_opts(c);
        bounds_opts(c);
        c.run = [&](const RunSpec& spec) { return run_suites(spec, true, true, true); };
    }

    // ---- replay ----
    std::string replay_file;
    std::optional<std::string> replay_output;
    auto* replay = app.add_subcommand("replay", "re-run the RunSpec of a record (first line of the file)");
    replay->add_option("--spec", replay_file, "file holding a record or a bare RunSpec")->required();
    replay->add_option("--output", replay_output, "override the recorded output path ('-' = stdout)");

    const bool replaying = argc > 1 && std::string(argv[1]) == "replay";
    std::vector<std::string> args;
    try {
        app.parse(argc, argv);
        if (replaying) {
            std::ifstream in(replay_file);
            std::string line;
            if (!in || !std::getline(in, line)) throw InvalidArgument("cannot read " + replay_file);
            Json j = Json::parse(line);
            RunSpec spec = run_spec_from_json(j.contains("spec") ? j["spec"] : j);
            if (replay_output) spec.params["output"] = *replay_output == "-" ? "" : *replay_output;
            std::stringstream words(spec.command);
            for (std::string w; words >> w;) args.push_back(w);
            for (const auto& [key, value] : spec.params.items()) {
                if (value.is_boolean()) {
                    if (value.get<bool>()) args.push_back("--" + key);
                    continue;
                }
                if (key == "output" && value.get<std::string>().empty()) continue;
                args.push_back("--" + key);
                args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
            }
            std::reverse(args.begin(), args.end());
            app.clear();
            o = Options{};
            app.parse(args);
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    for (auto& cmd : commands) {
        if (!cmd->app->parsed()) continue;
        RunSpec spec{cmd->name, cmd->params.json(), o.output};
        try {
            emitter = std::make_unique<Emitter>(o.output);
            return cmd->run(spec);
        } catch (const CapExceeded& e) {
            std::cerr << "cap exceeded: " << e.what() << '\n';
            return kExitCap;
        } catch (const InvalidArgument& e) {
            std::cerr << "invalid argument: " << e.what() << '\n';
            return kExitInvalid;
        } catch (const PatchTooSmall& e) {
            std::cerr << "patch too small: " << e.what() << '\n';
            return kExitInvalid;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitFailure;
        }
    }
    return kExitInvalid;
}
