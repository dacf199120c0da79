// Command-line front end. Subcommands expose the library's computations with
// reproducible, seed-determined output; exit codes: 0 success, 1 verification
// failure, 2 usage error, 3 desk-scale cap exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "groupflow/coloring.hpp"
#include "groupflow/group.hpp"
#include "groupflow/relations.hpp"
#include "groupflow/rewrite.hpp"

using nlohmann::json;
using namespace groupflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct CommonOpts {
    std::string group = "2,2";
    std::string tree = "claw:3";
    std::string format = "text";
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_tree = true) {
    cmd->add_option("--group", opts.group, "comma-separated cyclic moduli, e.g. 2,2");
    if (with_tree)
        cmd->add_option("--tree", opts.tree, "edge list \"p-c;p-c;...\" or claw:n");
    cmd->add_option("--format", opts.format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--jobs", opts.jobs, "worker threads for fiber scans")
        ->check(CLI::PositiveNumber);
}

FlowSpace make_space(const CommonOpts& opts) {
    return FlowSpace(Tree::parse_spec(opts.tree), FiniteAbelianGroup::parse(opts.group));
}

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json target_json(const LatticePoint& p) {
    json coords = json::array();
    for (auto c : p.coords) coords.push_back(c);
    return coords;
}

int run_flows(const CommonOpts& opts, bool count_only, std::int64_t cap) {
    FlowSpace space = make_space(opts);
    if (count_only) {
        auto n = space.flow_count_checked(cap);
        if (opts.format == "structured")
            std::cout << json{{"count", n}} << "\n";
        else
            std::cout << n << "\n";
        return kExitOk;
    }
    for (const Flow& f : space.enumerate_flows(cap)) {
        if (opts.format == "structured")
            std::cout << json{{"flow", space.serialize_flow(f)}} << "\n";
        else
            std::cout << space.serialize_flow(f) << "\n";
    }
    return kExitOk;
}

int run_polytope(const CommonOpts& opts) {
    FlowSpace space = make_space(opts);
    std::vector<LatticePoint> points;
    for (const Flow& f : space.enumerate_flows()) points.push_back(vertex_of(space, f));
    if (opts.format == "structured") {
        json j;
        j["edges"] = json::array();
        for (const auto& e : space.tree().edges())
            j["edges"].push_back(space.tree().name(e.parent) + "-" + space.tree().name(e.child));
        j["elements"] = json::array();
        for (const auto& el : space.group().enumerate_elements())
            j["elements"].push_back(space.group().element_to_string(el));
        j["points"] = json::array();
        for (const auto& p : points) j["points"].push_back(target_json(p));
        std::cout << j << "\n";
    } else {
        write_point_matrix(std::cout, points, space.edge_count() * space.order());
    }
    return kExitOk;
}

int run_gmodel(const CommonOpts& opts, const std::string& orbits_name) {
    FlowSpace space = make_space(opts);
    OrbitPartition orbits = orbit_preset(orbits_name, space.group());
    std::vector<SubLatticePoint> points;
    for (const Flow& f : space.enumerate_flows())
        points.push_back(project_sub(vertex_of(space, f), orbits));
    if (opts.format == "structured") {
        json j;
        j["orbits"] = json::array();
        for (const auto& label : orbits.labels()) j["orbits"].push_back(label);
        j["points"] = json::array();
        for (const auto& p : points) {
            json coords = json::array();
            for (auto c : p.coords) coords.push_back(c);
            j["points"].push_back(coords);
        }
        std::cout << j << "\n";
    } else {
        write_point_matrix(std::cout, points,
                           space.edge_count() * static_cast<int>(orbits.class_count()));
    }
    return kExitOk;
}

int run_davenport(const CommonOpts& opts) {
    auto g = FiniteAbelianGroup::parse(opts.group);
    int d = davenport_constant(g);
    if (opts.format == "structured")
        std::cout << json{{"group", g.to_string()}, {"davenport", d}} << "\n";
    else
        std::cout << d << "\n";
    return kExitOk;
}

int run_fiber_check(const CommonOpts& opts, int d_max, int degree_max) {
    FlowSpace space = make_space(opts);
    auto report = generation_degree_evidence(space, d_max, degree_max, opts.jobs);
    for (const auto& rec : report.records) {
        if (opts.format == "structured") {
            json j{{"degree", rec.degree},
                   {"fiber_size", rec.fiber_size},
                   {"certificate_size", rec.certificate_size},
                   {"target", target_json(rec.target)}};
            if (rec.least_connecting_degree < 0)
                j["connecting_degree"] = nullptr;
            else
                j["connecting_degree"] = rec.least_connecting_degree;
            std::cout << j << "\n";
        } else {
            std::cout << "degree=" << rec.degree << " fiber=" << rec.fiber_size << " connect=";
            if (rec.least_connecting_degree < 0)
                std::cout << ">" << d_max;
            else
                std::cout << rec.least_connecting_degree;
            std::cout << " cert=" << rec.certificate_size << " target=";
            for (std::size_t i = 0; i < rec.target.coords.size(); ++i) {
                if (i) std::cout << ' ';
                std::cout << rec.target.coords[i];
            }
            std::cout << "\n";
        }
    }
    if (opts.format == "structured") {
        std::cout << json{{"all_connected", report.all_connected},
                          {"max_connecting_degree", report.max_connecting_degree}}
                  << "\n";
    } else {
        std::cout << "all-connected=" << (report.all_connected ? "yes" : "no")
                  << " max-connecting-degree=" << report.max_connecting_degree << "\n";
    }
    return report.all_connected ? kExitOk : kExitVerification;
}

int run_saturate(const CommonOpts& opts, int degree, int samples, std::uint64_t seed, int d,
                 int m_max, const std::string& shape_name) {
    FlowSpace space = make_space(opts);
    FiberExplorer explorer(space);
    RelationShape shape = shape_name == "pairs-and-triples" ? RelationShape::PairsAndTriples
                                                            : RelationShape::Any;
    int max_m = 0;
    bool all_found = true;
    for (int i = 0; i < samples; ++i) {
        Relation r = random_relation(explorer, degree, shape, seed + static_cast<std::uint64_t>(i));
        auto m = saturated_generation_check(explorer, r, static_cast<std::size_t>(d), m_max);
        if (opts.format == "structured") {
            json j{{"sample", i}};
            if (m)
                j["m"] = *m;
            else
                j["m"] = nullptr;
            std::cout << j << "\n";
        } else {
            std::cout << "sample=" << i << " m=";
            if (m)
                std::cout << *m;
            else
                std::cout << "not-found<=" << m_max;
            std::cout << "\n";
        }
        if (m)
            max_m = std::max(max_m, *m);
        else
            all_found = false;
    }
    if (opts.format == "structured")
        std::cout << json{{"max_m", max_m}, {"all_found", all_found}} << "\n";
    else
        std::cout << "max-m=" << max_m << " all-found=" << (all_found ? "yes" : "no") << "\n";
    return all_found ? kExitOk : kExitVerification;
}

int run_kimura_reduce(const CommonOpts& opts, const std::string& relation_file, bool use_random,
                      int degree, const std::string& shape_name, std::uint64_t seed, int m_max,
                      const std::string& out_file) {
    FlowSpace space = make_space(opts);
    Relation r;
    if (use_random) {
        FiberExplorer explorer(space);
        RelationShape shape = shape_name == "pairs-and-triples" ? RelationShape::PairsAndTriples
                                                                : RelationShape::Any;
        r = random_relation(explorer, degree, shape, seed);
    } else {
        r = parse_relation(space, read_file(relation_file));
    }
    SaturationResult result = saturation_reduce(space, r, m_max);
    std::string text = serialize_trace(space, result.trace);
    if (out_file.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_file);
        out << text;
    }
    std::cerr << "m=" << result.m << " steps=" << result.trace.steps.size() << "\n";
    return kExitOk;
}

int run_verify_trace(const std::string& path, const std::string& format) {
    ParsedTrace parsed = parse_trace(read_file(path));
    FlowSpace space(Tree::parse_spec(parsed.tree_spec),
                    FiniteAbelianGroup::parse(parsed.group_spec));
    verify_trace(space, parsed.trace);
    if (format == "structured")
        std::cout << json{{"verified", true},
                          {"steps", parsed.trace.steps.size()},
                          {"pads", parsed.trace.total_padding()}}
                  << "\n";
    else
        std::cout << "ok steps=" << parsed.trace.steps.size()
                  << " pads=" << parsed.trace.total_padding() << "\n";
    return kExitOk;
}

int run_coloring_witness(int count, int length, int colors, int support, int a, double epsilon,
                         std::uint64_t seed, std::size_t budget, int trials,
                         const std::string& input_file, const std::string& format) {
    std::vector<std::vector<Coloring>> instances;
    if (!input_file.empty()) {
        std::istringstream in(read_file(input_file));
        std::vector<Coloring> colorings;
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) colorings.push_back(Coloring::from_string(line));
        instances.push_back(std::move(colorings));
    } else {
        Rng rng = seeded_rng(seed);
        for (int t = 0; t < trials; ++t) {
            std::vector<Coloring> colorings;
            for (int i = 0; i < count; ++i) {
                Coloring c{std::vector<int>(length, 0)};
                auto positions = rng_distinct(rng, length, support);
                for (int p : positions)
                    c.values[p] = 1 + static_cast<int>(rng_below(rng, colors));
                colorings.push_back(std::move(c));
            }
            instances.push_back(std::move(colorings));
        }
    }
    int found = 0;
    for (std::size_t t = 0; t < instances.size(); ++t) {
        auto witness = lemma52_witness(instances[t], a, epsilon, budget);
        bool ok = witness.has_value();
        if (ok && !check_window_witness(instances[t], *witness, a, epsilon))
            throw std::logic_error("witness failed its own checker");
        if (ok) ++found;
        if (format == "structured") {
            json j{{"trial", t}, {"found", ok}};
            if (ok) {
                j["transforms"] = witness->transform_trace.size();
                j["positions"] = witness->positions.size();
            }
            std::cout << j << "\n";
        } else {
            std::cout << "trial=" << t << (ok ? " found" : " not-found");
            if (ok)
                std::cout << " transforms=" << witness->transform_trace.size()
                          << " positions=" << witness->positions.size();
            std::cout << "\n";
        }
    }
    if (format == "structured")
        std::cout << json{{"found", found}, {"trials", instances.size()}} << "\n";
    else
        std::cout << "found=" << found << "/" << instances.size() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"groupflow: exact combinatorics of group-based flows on trees"};
    app.require_subcommand(1);

    CommonOpts flows_opts;
    bool flows_count = false;
    std::int64_t flows_cap = FlowSpace::kDefaultEnumerationCap;
    auto* cmd_flows = app.add_subcommand("flows", "enumerate or count group-based flows");
    add_common(cmd_flows, flows_opts);
    cmd_flows->add_flag("--count", flows_count, "print only the number of flows");
    cmd_flows->add_option("--cap", flows_cap, "enumeration cap");

    CommonOpts poly_opts;
    auto* cmd_poly = app.add_subcommand("polytope", "emit the vertex matrix of the flow polytope");
    add_common(cmd_poly, poly_opts);

    CommonOpts gmodel_opts;
    std::string orbits_name = "jukes-cantor";
    auto* cmd_gmodel =
        app.add_subcommand("gmodel-project", "emit the orbit-projected vertex matrix");
    add_common(cmd_gmodel, gmodel_opts);
    cmd_gmodel->add_option("--orbits", orbits_name, "orbit preset: kimura2 or jukes-cantor");

    CommonOpts dav_opts;
    auto* cmd_dav = app.add_subcommand("davenport", "Davenport constant of a group");
    add_common(cmd_dav, dav_opts, false);

    CommonOpts fiber_opts;
    int fiber_dmax = 4, fiber_degree = 4;
    auto* cmd_fiber =
        app.add_subcommand("fiber-check", "connectivity of all fibers up to a degree bound");
    add_common(cmd_fiber, fiber_opts);
    cmd_fiber->add_option("--dmax", fiber_dmax, "largest move degree to try");
    cmd_fiber->add_option("--degree", fiber_degree, "largest fiber degree to scan");

    CommonOpts sat_opts;
    int sat_degree = 4, sat_samples = 10, sat_d = 4, sat_mmax = 16;
    std::uint64_t sat_seed = 0;
    std::string sat_shape = "any";
    auto* cmd_sat =
        app.add_subcommand("saturate", "saturated generation check over sampled relations");
    add_common(cmd_sat, sat_opts);
    cmd_sat->add_option("--degree", sat_degree, "degree of sampled relations");
    cmd_sat->add_option("--count", sat_samples, "number of samples");
    cmd_sat->add_option("--seed", sat_seed, "random seed")->required();
    cmd_sat->add_option("--dmax", sat_d, "move degree");
    cmd_sat->add_option("--m-max", sat_mmax, "largest padding to try");
    cmd_sat->add_option("--shape", sat_shape, "any or pairs-and-triples")
        ->check(CLI::IsMember({"any", "pairs-and-triples"}));

    CommonOpts kim_opts;
    kim_opts.tree = "claw:6";
    std::string kim_relation;
    bool kim_random = false;
    int kim_degree = 6, kim_mmax = 64;
    std::uint64_t kim_seed = 0;
    std::string kim_shape = "pairs-and-triples";
    std::string kim_out;
    auto* cmd_kim =
        app.add_subcommand("kimura-reduce", "reduce a Z2xZ2 claw relation, emitting a trace");
    add_common(cmd_kim, kim_opts);
    cmd_kim->add_option("--relation", kim_relation, "relation file (flows '+'-joined, sides '=')");
    cmd_kim->add_flag("--random", kim_random, "reduce a random relation instead");
    cmd_kim->add_option("--degree", kim_degree, "degree of the random relation");
    cmd_kim->add_option("--shape", kim_shape, "any or pairs-and-triples")
        ->check(CLI::IsMember({"any", "pairs-and-triples"}));
    cmd_kim->add_option("--seed", kim_seed, "random seed (required with --random)");
    cmd_kim->add_option("--m-max", kim_mmax, "padding budget");
    cmd_kim->add_option("--out", kim_out, "write the trace to a file instead of stdout");

    std::string verify_path;
    std::string verify_format = "text";
    auto* cmd_verify = app.add_subcommand("verify-trace", "replay and check a reduction trace");
    cmd_verify->add_option("trace", verify_path, "trace file, or - for stdin")->required();
    cmd_verify->add_option("--format", verify_format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));

    int col_count = 20, col_length = 201, col_colors = 3, col_support = 4, col_a = 2;
    double col_eps = 0.5;
    std::uint64_t col_seed = 0;
    std::size_t col_budget = 10000;
    int col_trials = 1;
    std::string col_input;
    std::string col_format = "text";
    auto* cmd_col =
        app.add_subcommand("coloring-witness", "search for the combinatorial lemma's conclusion");
    cmd_col->add_option("--count", col_count, "colorings per instance");
    cmd_col->add_option("--length", col_length, "coloring length n+1");
    cmd_col->add_option("--colors", col_colors, "number of nonzero colors");
    cmd_col->add_option("--support", col_support, "support size per coloring");
    cmd_col->add_option("--a", col_a, "window width");
    cmd_col->add_option("--epsilon", col_eps, "window fraction to give up");
    cmd_col->add_option("--seed", col_seed, "random seed");
    cmd_col->add_option("--budget", col_budget, "transformation budget");
    cmd_col->add_option("--trials", col_trials, "number of random instances");
    cmd_col->add_option("--input", col_input, "file of digit-string colorings");
    cmd_col->add_option("--format", col_format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_flows->parsed()) return run_flows(flows_opts, flows_count, flows_cap);
        if (cmd_poly->parsed()) return run_polytope(poly_opts);
        if (cmd_gmodel->parsed()) return run_gmodel(gmodel_opts, orbits_name);
        if (cmd_dav->parsed()) return run_davenport(dav_opts);
        if (cmd_fiber->parsed()) return run_fiber_check(fiber_opts, fiber_dmax, fiber_degree);
        if (cmd_sat->parsed())
            return run_saturate(sat_opts, sat_degree, sat_samples, sat_seed, sat_d, sat_mmax,
                                sat_shape);
        if (cmd_kim->parsed()) {
            if (kim_random && cmd_kim->count("--seed") == 0)
                throw std::invalid_argument("--random requires an explicit --seed");
            if (!kim_random && kim_relation.empty())
                throw std::invalid_argument("need --relation FILE or --random");
            return run_kimura_reduce(kim_opts, kim_relation, kim_random, kim_degree, kim_shape,
                                     kim_seed, kim_mmax, kim_out);
        }
        if (cmd_verify->parsed()) return run_verify_trace(verify_path, verify_format);
        if (cmd_col->parsed()) {
            if (col_input.empty() && cmd_col->count("--seed") == 0)
                throw std::invalid_argument("random colorings require an explicit --seed");
            return run_coloring_witness(col_count, col_length, col_colors, col_support, col_a,
                                        col_eps, col_seed, col_budget, col_trials, col_input,
                                        col_format);
        }
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const TraceError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const KimuraDispatchError& e) {
        std::cerr << "reduction failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
    return kExitUsage;
}
