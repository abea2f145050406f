// Command-line front end: dataset generation, index build/load, the two
// query engines, the fixed-weight oracle, and a small benchmark harness.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "macs/macs.hpp"

namespace {

using namespace macs;

struct DatasetArgs {
    std::string road, social, attrs, locations;
    bool fixture = false;
};

void add_dataset_flags(CLI::App* cmd, DatasetArgs& ds) {
    cmd->add_option("--road", ds.road, "road network TSV");
    cmd->add_option("--social", ds.social, "social edge TSV");
    cmd->add_option("--attrs", ds.attrs, "attribute TSV");
    cmd->add_option("--locations", ds.locations, "location TSV");
    cmd->add_flag("--fixture", ds.fixture, "use the built-in worked-example dataset");
}

RoadSocialNetwork load_dataset(const DatasetArgs& ds, Region* fixture_region = nullptr) {
    if (ds.fixture) {
        auto f = build_running_example_fixture();
        if (fixture_region) *fixture_region = f.region;
        return std::move(f.rsn);
    }
    if (ds.road.empty() || ds.social.empty() || ds.attrs.empty() || ds.locations.empty())
        throw CLI::ValidationError(
            "dataset", "either --fixture or all of --road/--social/--attrs/--locations");
    RoadSocialNetwork rsn;
    rsn.road = load_road_network(ds.road);
    rsn.social = load_social_network(ds.social, ds.attrs, ds.locations, rsn.road);
    validate(rsn);
    return rsn;
}

// `lo1,hi1xlo2,hi2[x...]`
Region parse_region(const std::string& s) {
    Weights lo, hi;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        auto comma = part.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--region", "expected lo,hi pairs separated by 'x'");
        lo.push_back(std::stod(part.substr(0, comma)));
        hi.push_back(std::stod(part.substr(comma + 1)));
    }
    return Region::rectangle(lo, hi);
}

std::string region_to_string(const Region& r) {
    std::string out;
    for (int i = 0; i < r.dim; ++i) {
        if (i) out += "x";
        out += format_double(r.rect_lo[static_cast<std::size_t>(i)]) + "," +
               format_double(r.rect_hi[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<int> parse_q(const std::string& s, const SocialNetwork& soc) {
    std::vector<int> Q;
    std::stringstream ss(s);
    std::string label;
    while (std::getline(ss, label, ',')) {
        int v = soc.find_vertex(label);
        if (v < 0) throw CLI::ValidationError("--q", "unknown vertex " + label);
        Q.push_back(v);
    }
    std::sort(Q.begin(), Q.end());
    Q.erase(std::unique(Q.begin(), Q.end()), Q.end());
    if (Q.empty()) throw CLI::ValidationError("--q", "empty query set");
    return Q;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

int run_gen(const GenSpec& spec, const std::string& out_prefix) {
    auto rsn = generate_road_social(spec);
    std::ofstream road(out_prefix + ".road.tsv"), social(out_prefix + ".social.tsv"),
        attrs(out_prefix + ".attrs.tsv"), locations(out_prefix + ".locations.tsv");
    if (!road || !social || !attrs || !locations)
        throw std::runtime_error("cannot write dataset files at prefix " + out_prefix);
    save_road_network(rsn.road, road);
    save_social_network(rsn.social, rsn.road, social, attrs, locations);
    std::cerr << "wrote " << out_prefix << ".{road,social,attrs,locations}.tsv"
              << " (n=" << rsn.social.n() << ", m=" << rsn.social.m() << ")\n";
    return 0;
}

struct QueryArgs {
    DatasetArgs ds;
    std::string q, region_str, mode = "gs-nc", out, index_path, strategy = "layer-density";
    int k = 4;
    double t = 1e18;
    int j = 0;
    double zeta = 100, lambda = 10;
    int budget = 32;
    std::uint64_t seed = 1;
    bool dump_dag = false, timings = false;
};

int run_query(const QueryArgs& a) {
    Region fixture_region;
    auto rsn = load_dataset(a.ds, &fixture_region);
    auto Q = parse_q(a.q, rsn.social);
    Region region = a.region_str.empty() && a.ds.fixture ? fixture_region
                                                         : parse_region(a.region_str);
    if (region.dim != rsn.social.d - 1)
        throw CLI::ValidationError("--region", "region dimension must be d-1");
    bool topj = a.mode == "gs-t" || a.mode == "ls-t";
    if (a.j > 0 && !topj)
        throw CLI::ValidationError("--j", "top-j count requires a *-t mode");
    int j = a.j > 0 ? a.j : 1;

    auto t0 = std::chrono::steady_clock::now();
    std::optional<KTCore> core;
    std::optional<DominanceGraph> gd;
    if (!a.index_path.empty()) {
        auto idx = load_index(a.index_path);
        std::vector<int> qs = idx.Q;
        std::sort(qs.begin(), qs.end());
        if (qs != Q || idx.k != a.k || idx.t != a.t || idx.region_lo != region.rect_lo ||
            idx.region_hi != region.rect_hi)
            throw std::runtime_error("index file does not match the query parameters");
        KTCore c;
        c.subgraph = Subgraph::of(rsn.social, idx.members);
        c.k = idx.k;
        c.t = idx.t;
        c.Q = idx.Q;
        c.query_distance.assign(static_cast<std::size_t>(rsn.social.n()), 0.0);
        for (std::size_t i = 0; i < idx.members.size(); ++i)
            c.query_distance[static_cast<std::size_t>(idx.members[i])] = idx.query_distance[i];
        core = std::move(c);
        gd = DominanceGraph::from_arcs(idx.members, idx.arcs);
    } else {
        core = maximal_kt_core(rsn, Q, a.k, a.t);
        if (core) gd = build_rdominance_graph(*core, region, rsn.social.attributes);
    }

    ResultSet rs;
    SearchMode mode = topj ? SearchMode::TopJ : SearchMode::NonContained;
    if (!core) {
        rs.no_core = true;
        rs.mode = mode;
        rs.j = j;
    } else if (a.mode == "gs-nc" || a.mode == "gs-t") {
        rs = gs_search_prepared(rsn, Q, a.k, region, mode, j, core->subgraph.members(), *gd);
    } else if (a.mode == "ls-nc" || a.mode == "ls-t") {
        ExpandParams p;
        p.strategy = strategy_from_string(a.strategy);
        p.lambda = a.lambda;
        p.zeta = a.zeta;
        p.budget = a.budget;
        rs = ls_search_prepared(rsn, Q, a.k, a.t, region, mode, j, p, *gd);
    } else {
        throw CLI::ValidationError("--mode", "expected gs-nc|gs-t|ls-nc|ls-t");
    }
    auto t1 = std::chrono::steady_clock::now();
    double ms = a.timings
                    ? std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0
                    : 0.0;

    if (a.dump_dag && gd) gd->dump_dot(std::cerr, rsn.social.labels);

    QueryEcho echo;
    echo.engine = a.mode;
    for (int q : Q) echo.q_labels.push_back(rsn.social.labels[static_cast<std::size_t>(q)]);
    echo.k = a.k;
    echo.t = a.t;
    echo.j = topj ? j : 1;
    echo.region = region_to_string(region);
    echo.seed = a.seed;
    std::ofstream file;
    auto& out = open_out(file, a.out);
    write_result_document(out, rs, rsn.social, echo,
                          core ? static_cast<int>(core->subgraph.count) : 0, ms);
    return rs.no_core ? 2 : 0;
}

struct OracleArgs {
    DatasetArgs ds;
    std::string q, region_str, at_weight, out;
    int k = 4;
    double t = 1e18;
    int j = 1;
};

int run_oracle(const OracleArgs& a) {
    Region fixture_region;
    auto rsn = load_dataset(a.ds, &fixture_region);
    auto Q = parse_q(a.q, rsn.social);
    Weights w;
    {
        std::stringstream ss(a.at_weight);
        std::string part;
        while (std::getline(ss, part, ',')) w.push_back(std::stod(part));
    }
    if (static_cast<int>(w.size()) != rsn.social.d - 1)
        throw CLI::ValidationError("--at-weight", "weight dimension must be d-1");
    auto r = oracle_chain_at(rsn, Q, a.k, a.t, w);
    std::ofstream file;
    auto& out = open_out(file, a.out);
    ojson hdr;
    hdr["type"] = "oracle";
    hdr["w"] = w;
    hdr["k"] = a.k;
    hdr["t"] = a.t;
    hdr["chain_length"] = r.chain.size();
    out << hdr.dump() << '\n';
    auto tops = r.top(a.j);
    for (std::size_t i = 0; i < tops.size(); ++i) {
        ojson jc;
        jc["type"] = "ranked";
        jc["rank"] = i + 1;
        ojson members = ojson::array();
        for (int v : tops[i]) members.push_back(rsn.social.labels[static_cast<std::size_t>(v)]);
        jc["members"] = std::move(members);
        jc["score"] = community_score(tops[i], w, rsn.social.attributes).first;
        out << jc.dump() << '\n';
    }
    return r.chain.empty() ? 2 : 0;
}

struct IndexBuildArgs {
    DatasetArgs ds;
    std::string q, region_str, out;
    int k = 4;
    double t = 1e18;
};

int run_index_build(const IndexBuildArgs& a) {
    Region fixture_region;
    auto rsn = load_dataset(a.ds, &fixture_region);
    auto Q = parse_q(a.q, rsn.social);
    Region region = a.region_str.empty() && a.ds.fixture ? fixture_region
                                                         : parse_region(a.region_str);
    auto core = maximal_kt_core(rsn, Q, a.k, a.t);
    if (!core) {
        std::cerr << "no (k,t)-core for the given parameters; nothing to index\n";
        return 2;
    }
    auto gd = build_rdominance_graph(*core, region, rsn.social.attributes);
    save_index(make_index(*core, gd, region.rect_lo, region.rect_hi), a.out);
    std::cerr << "index written: " << a.out << " (|H_k^t|=" << core->subgraph.count
              << ", arcs=" << gd.arcs().size() << ")\n";
    return 0;
}

int run_index_load(const std::string& path) {
    auto idx = load_index(path);
    ojson j;
    j["type"] = "index";
    j["k"] = idx.k;
    j["t"] = idx.t;
    j["members"] = idx.members.size();
    j["arcs"] = idx.arcs.size();
    std::cout << j.dump() << '\n';
    return 0;
}

struct BenchArgs {
    int n = 1000, d = 3, grid = 30;
    double avg_degree = 12, t = 6.0, region_side = 0.05;
    std::string mode = "independent", k_list = "4,8", out;
    int queries = 10, qsize = 4;
    std::uint64_t seed = 1;
};

int run_bench(const BenchArgs& a) {
    GenSpec spec;
    spec.n_social = a.n;
    spec.d = a.d;
    spec.mode = attr_mode_from_string(a.mode);
    spec.grid_width = spec.grid_height = a.grid;
    spec.avg_degree = a.avg_degree;
    spec.seed = a.seed;
    auto rsn = generate_road_social(spec);
    std::mt19937_64 rng(a.seed ^ 0x9e3779b97f4a7c15ull);

    std::ofstream file;
    auto& out = open_out(file, a.out);
    out << "algorithm,k,queries,mean_ms,cells_mean,communities_mean,ls_gs_ratio\n";

    std::vector<int> ks;
    {
        std::stringstream ss(a.k_list);
        std::string part;
        while (std::getline(ss, part, ',')) ks.push_back(std::stoi(part));
    }
    auto coreness = core_decomposition(rsn.social);
    for (int k : ks) {
        std::vector<int> pool;
        for (int v = 0; v < rsn.social.n(); ++v)
            if (coreness[static_cast<std::size_t>(v)] >= k) pool.push_back(v);
        if (pool.empty()) continue;
        struct Acc {
            double ms = 0;
            long cells = 0, comms = 0;
            int runs = 0;
        };
        Acc gs_acc, ls_acc;
        long ls_matched = 0, gs_total = 0;
        for (int qi = 0; qi < a.queries; ++qi) {
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            std::vector<int> Q;
            for (int i = 0; i < a.qsize; ++i) Q.push_back(pool[pick(rng)]);
            std::sort(Q.begin(), Q.end());
            Q.erase(std::unique(Q.begin(), Q.end()), Q.end());
            int dim = a.d - 1;
            Weights lo(dim), hi(dim);
            for (int i = 0; i < dim; ++i) {
                std::uniform_real_distribution<double> u(0.05, 0.9 / dim - a.region_side);
                lo[static_cast<std::size_t>(i)] = u(rng);
                hi[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] + a.region_side;
            }
            Region region = Region::rectangle(lo, hi);
            auto run = [&](auto&& fn, Acc& acc) {
                auto t0 = std::chrono::steady_clock::now();
                ResultSet rs = fn();
                auto t1 = std::chrono::steady_clock::now();
                acc.ms += std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
                acc.cells += static_cast<long>(rs.entries.size());
                for (const auto& e : rs.entries) acc.comms += static_cast<long>(e.communities.size());
                acc.runs += 1;
                return rs;
            };
            auto gs = run([&] { return gs_search(rsn, Q, k, a.t, region, SearchMode::NonContained); }, gs_acc);
            auto ls = run([&] { return ls_search(rsn, Q, k, a.t, region, SearchMode::NonContained); }, ls_acc);
            for (const auto& e : gs.entries) {
                ++gs_total;
                const ResultCell* lc = find_cell(ls, e.cell.witness);
                if (lc && lc->communities[0].members == e.communities[0].members) ++ls_matched;
            }
        }
        double ratio = gs_total ? static_cast<double>(ls_matched) / gs_total : 1.0;
        auto row = [&](const char* name, const Acc& acc) {
            out << name << ',' << k << ',' << acc.runs << ','
                << format_double(acc.runs ? acc.ms / acc.runs : 0) << ','
                << format_double(acc.runs ? static_cast<double>(acc.cells) / acc.runs : 0) << ','
                << format_double(acc.runs ? static_cast<double>(acc.comms) / acc.runs : 0) << ','
                << format_double(ratio) << '\n';
        };
        row("gs-nc", gs_acc);
        row("ls-nc", ls_acc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-attributed community search over road-social networks"};
    app.require_subcommand(1);

    GenSpec gen_spec;
    std::string gen_mode = "independent", gen_out = "dataset";
    int gen_grid_w = 10, gen_grid_h = 10;
    auto* gen = app.add_subcommand("gen", "generate a synthetic road-social dataset");
    gen->add_option("--n", gen_spec.n_social, "social vertex count");
    gen->add_option("--d", gen_spec.d, "attribute dimensionality");
    gen->add_option("--mode", gen_mode, "independent|correlated|anti-correlated");
    gen->add_option("--grid-w", gen_grid_w, "road grid width");
    gen->add_option("--grid-h", gen_grid_h, "road grid height");
    gen->add_option("--avg-degree", gen_spec.avg_degree, "social average degree");
    gen->add_option("--seed", gen_spec.seed, "rng seed");
    gen->add_option("--out", gen_out, "output path prefix");

    QueryArgs qa;
    auto* query = app.add_subcommand("query", "run a community search query");
    add_dataset_flags(query, qa.ds);
    query->add_option("--q", qa.q, "query vertices, comma separated")->required();
    query->add_option("--k", qa.k, "coreness threshold")->required();
    query->add_option("--t", qa.t, "query distance budget");
    query->add_option("--j", qa.j, "top-j count (only with gs-t / ls-t)");
    query->add_option("--region", qa.region_str, "preference region lo,hi x lo,hi");
    query->add_option("--mode", qa.mode, "gs-nc|gs-t|ls-nc|ls-t");
    query->add_option("--strategy", qa.strategy, "layer-density|layer-mindeg");
    query->add_option("--zeta", qa.zeta, "layer priority ceiling");
    query->add_option("--lambda", qa.lambda, "density weight");
    query->add_option("--budget", qa.budget, "candidate budget");
    query->add_option("--seed", qa.seed, "rng seed (echoed)");
    query->add_option("--index", qa.index_path, "preload index file");
    query->add_option("--out", qa.out, "output file (default stdout)");
    query->add_flag("--dump-dag", qa.dump_dag, "dump the dominance DAG as DOT to stderr");
    query->add_flag("--timings", qa.timings, "record wall time in the document");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "fixed-weight iterative-deletion reference");
    add_dataset_flags(oracle, oa.ds);
    oracle->add_option("--q", oa.q)->required();
    oracle->add_option("--k", oa.k)->required();
    oracle->add_option("--t", oa.t);
    oracle->add_option("--j", oa.j);
    oracle->add_option("--at-weight", oa.at_weight, "weight vector w1,..,w_{d-1}")->required();
    oracle->add_option("--out", oa.out);

    auto* index = app.add_subcommand("index", "persist or inspect query indexes");
    index->require_subcommand(1);
    IndexBuildArgs ia;
    auto* ib = index->add_subcommand("build", "build and save H_k^t plus the dominance graph");
    add_dataset_flags(ib, ia.ds);
    ib->add_option("--q", ia.q)->required();
    ib->add_option("--k", ia.k)->required();
    ib->add_option("--t", ia.t);
    ib->add_option("--region", ia.region_str);
    ib->add_option("--out", ia.out)->required();
    std::string il_path;
    auto* il = index->add_subcommand("load", "load and summarize an index file");
    il->add_option("--index", il_path)->required();

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "timing grid over generated data");
    bench->add_option("--n", ba.n);
    bench->add_option("--d", ba.d);
    bench->add_option("--mode", ba.mode);
    bench->add_option("--grid", ba.grid);
    bench->add_option("--avg-degree", ba.avg_degree);
    bench->add_option("--t", ba.t);
    bench->add_option("--region-side", ba.region_side);
    bench->add_option("--k-list", ba.k_list);
    bench->add_option("--queries", ba.queries);
    bench->add_option("--q-size", ba.qsize);
    bench->add_option("--seed", ba.seed);
    bench->add_option("--out", ba.out);

    try {
        app.parse(argc, argv);
        if (gen->parsed()) {
            gen_spec.mode = attr_mode_from_string(gen_mode);
            gen_spec.grid_width = gen_grid_w;
            gen_spec.grid_height = gen_grid_h;
            return run_gen(gen_spec, gen_out);
        }
        if (query->parsed()) return run_query(qa);
        if (oracle->parsed()) return run_oracle(oa);
        if (index->parsed()) {
            if (ib->parsed()) return run_index_build(ia);
            return run_index_load(il_path);
        }
        if (bench->parsed()) return run_bench(ba);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
