#include "netgain/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "netgain/gain.hpp"
#include "netgain/net.hpp"
#include "netgain/parallel.hpp"
#include "netgain/rational.hpp"
#include "netgain/scramble.hpp"
#include "netgain/walsh.hpp"

namespace netgain::cli {

namespace {

using nlohmann::json;

struct GenerateArgs {
    std::string kind;
    int b = 2, s = 1, m = 1, n = 0;
    std::uint64_t seed = 0;
    std::string directions;
    std::string out;
};

struct NetArgs {
    std::string net_file;
    std::string out;
};

json rational_json(const Rational& q) { return to_string(q); }

void put_rational(json& j, const std::string& key, const Rational& q) {
    j[key] = to_string(q);
    j[key + "_decimal"] = to_double(q);
}

json one_based(const Subset& u) {
    json a = json::array();
    for (int j : u) a.push_back(j + 1);
    return a;
}

json report(const std::string& command, const DigitalNet& net, json result) {
    return json{{"schema", kSchemaVersion},
                {"command", command},
                {"net", {{"b", net.b()}, {"s", net.s()}, {"m", net.m()}, {"n", net.n()}}},
                {"result", std::move(result)}};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text << '\n';
}

GainQuery to_query(const DigitalNet& net, const std::vector<int>& u1, const std::vector<int>& k) {
    if (u1.size() != k.size()) throw std::invalid_argument("--u and --k must have the same length");
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < u1.size(); ++i) pairs.emplace_back(u1[i] - 1, k[i]);
    std::sort(pairs.begin(), pairs.end());
    GainQuery q;
    for (auto [j, kj] : pairs) {
        q.u.push_back(j);
        q.k.push_back(kj);
    }
    q.validate(net.s());
    return q;
}

std::string quoted_list(const std::vector<int>& v, int offset) {
    std::string s = "\"";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + offset);
    return s + "\"";
}

Integrand parse_integrand(const std::string& spec, const DigitalNet& net) {
    if (spec.rfind("wal:", 0) == 0) {
        WalshIntegrand w;
        std::stringstream ss(spec.substr(4));
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(item, &used);
            if (used != item.size()) throw std::invalid_argument("bad Walsh index " + item);
            w.l.push_back(v);
        }
        if (w.l.size() != static_cast<std::size_t>(net.s()))
            throw std::invalid_argument("Walsh integrand needs " + std::to_string(net.s()) + " components");
        return w;
    }
    if (spec.rfind("grid:", 0) == 0) {
        GridFunction g = read_grid_file(spec.substr(5));
        if (g.b != net.b() || g.s != net.s()) throw std::invalid_argument("grid function does not match the net");
        return g;
    }
    throw std::invalid_argument("integrand must be wal:l1,...,ls or grid:FILE");
}

DigitalNet build_net(const GenerateArgs& a) {
    const Field field = Field::of_order(a.b);
    if (a.kind == "identity") return make_identity_net(field, a.s, a.m, a.n);
    if (a.kind == "faure") return make_faure_net(field, a.s, a.m, a.n);
    if (a.kind == "random") return make_random_net(field, a.s, a.m, a.n == 0 ? a.m : a.n, a.seed);
    if (a.kind == "example") return make_example_net(field);
    if (a.kind == "sobol") {
        if (a.b != 2) throw std::invalid_argument("sobol nets are base 2");
        if (a.directions.empty()) throw std::invalid_argument("sobol needs --directions");
        std::ifstream in(a.directions);
        if (!in) throw std::runtime_error("cannot open " + a.directions);
        return load_sobol_net(in, a.s, a.m, a.n);
    }
    throw std::invalid_argument("unknown net kind " + a.kind);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gain coefficients and scrambled-net variance for digital nets", "netgain"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Construct a digital net and write it as JSON");
    generate->add_option("kind", gen.kind, "identity | faure | random | example | sobol")
        ->required()
        ->check(CLI::IsMember({"identity", "faure", "random", "example", "sobol"}));
    generate->add_option("--b", gen.b, "Field order");
    generate->add_option("--s", gen.s, "Dimension");
    generate->add_option("--m", gen.m, "log_b of the number of points");
    generate->add_option("--n", gen.n, "Digit precision (default m)");
    generate->add_option("--seed", gen.seed, "Seed for random nets");
    generate->add_option("--directions", gen.directions, "Joe-Kuo direction-number file");
    generate->add_option("--out", gen.out, "Output file (default stdout)");

    NetArgs common;
    bool bruteforce = false;
    auto* tvalue = app.add_subcommand("tvalue", "Strict t-value");
    tvalue->add_option("net", common.net_file)->required()->check(CLI::ExistingFile);
    tvalue->add_flag("--bruteforce", bruteforce, "Cross-check against elementary-interval counts");
    tvalue->add_option("--out", common.out);

    std::vector<int> u_arg, k_arg;
    std::string method = "formula";
    auto* gain = app.add_subcommand("gain", "Gain coefficient of one bucket (u, k)");
    gain->add_option("net", common.net_file)->required()->check(CLI::ExistingFile);
    gain->add_option("--u", u_arg, "1-based coordinates, comma separated")->required()->delimiter(',');
    gain->add_option("--k", k_arg, "One entry per coordinate of u")->required()->delimiter(',');
    gain->add_option("--method", method)->check(CLI::IsMember({"definition", "formula", "both"}));
    gain->add_option("--out", common.out);

    int kmax = -1;
    auto* table = app.add_subcommand("gain-table", "CSV of gain coefficients and bounds");
    table->add_option("net", common.net_file)->required()->check(CLI::ExistingFile);
    table->add_option("--kmax", kmax, "Largest k_j (default n)");
    table->add_option("--out", common.out);

    auto* maximal = app.add_subcommand("maximal", "Maximal gain coefficient");
    maximal->add_option("net", common.net_file)->required()->check(CLI::ExistingFile);
    maximal->add_option("--out", common.out);

    std::string integrand_arg;
    int reps = 10000;
    std::uint64_t seed = 0;
    int depth = 0;
    auto* svar = app.add_subcommand("scramble-var", "Empirical against theoretical scrambled-net variance");
    svar->add_option("net", common.net_file)->required()->check(CLI::ExistingFile);
    svar->add_option("--integrand", integrand_arg, "wal:l1,...,ls or grid:FILE")->required();
    svar->add_option("--reps", reps, "Replicates")->check(CLI::Range(2, 100000000));
    svar->add_option("--seed", seed, "Master seed");
    svar->add_option("--depth", depth, "Scrambling depth (default from net and integrand)");
    svar->add_option("--out", common.out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (generate->parsed()) {
            if (gen.kind != "example" && gen.n == 0) gen.n = gen.m;
            emit(net_to_json(build_net(gen)), gen.out, out);
            return 0;
        }

        const DigitalNet net = read_net_file(common.net_file);

        if (tvalue->parsed()) {
            json r{{"t", strict_t_value(net)}};
            if (bruteforce) r["oracle_agrees"] = strict_t_value_bruteforce(net) == r["t"].get<int>();
            emit(report("tvalue", net, r).dump(2), common.out, out);
        } else if (gain->parsed()) {
            const GainQuery q = to_query(net, u_arg, k_arg);
            json r{{"u", one_based(q.u)}, {"k", q.k}};
            std::optional<Rational> def, form;
            if (method != "formula") {
                int d = net.n();
                for (int kj : q.k) d = std::max(d, kj + 1);
                def = gain_definition(generate_points(net, d), q);
            }
            if (method != "definition") form = gain_formula(net, q);
            if (def) put_rational(r, "definition", *def);
            if (form) put_rational(r, "formula", *form);
            const Rational g = form ? *form : *def;
            put_rational(r, "gamma", g);
            if (def && form) r["equal"] = *def == *form;
            emit(report("gain", net, r).dump(2), common.out, out);
        } else if (table->parsed()) {
            if (kmax < 0) kmax = net.n();
            const int t = strict_t_value(net);
            std::vector<GainQuery> queries;
            for (const auto& u : nonempty_subsets(net.s()))
                for (auto& k : enumerate_k(u.size(), kmax)) queries.push_back({u, k});
            std::vector<std::string> rows(queries.size());
            parallel_for(queries.size(), [&](std::size_t i) {
                const auto& q = queries[i];
                const Rational g = gain_formula(net, q);
                const Rational bb = bound_B(net, q);
                std::ostringstream row;
                row << quoted_list(q.u, 1) << ',' << quoted_list(q.k, 0) << ',' << g.numerator() << ','
                    << g.denominator() << ',' << bb.numerator() << ',' << bb.denominator() << ','
                    << static_cast<int>(bound_case(t, net.m(), static_cast<int>(q.u.size()), q.k_total()));
                rows[i] = row.str();
            });
            std::string csv = "u,k,gamma_num,gamma_den,B_num,B_den,bound_case";
            for (const auto& row : rows) csv += "\n" + row;
            emit(csv, common.out, out);
        } else if (maximal->parsed()) {
            const MaxGainReport rep = gamma_exact(net);
            json r;
            put_rational(r, "gamma", rep.gamma);
            r["c1_full_rank"] = rep.c1_full_rank;
            r["closed_form_used"] = rep.closed_form_used;
            json subsets = json::array();
            for (const auto& u : rep.order) {
                const auto& sr = rep.subsets.at(u);
                json e{{"u", one_based(u)}, {"t_star", sr.t_star}, {"E1", sr.e1}, {"E2", sr.e2},
                       {"c1_full_rank", sr.c1_full_rank}, {"closed_form_used", sr.closed_form_used}};
                e["gamma_u_bound"] = rational_json(sr.gamma_u_bound);
                e["gamma_u_closed_form"] = rational_json(sr.gamma_u_closed_form);
                put_rational(e, "gamma_u_star", sr.gamma_u_star);
                subsets.push_back(std::move(e));
            }
            r["subsets"] = std::move(subsets);
            emit(report("maximal", net, r).dump(2), common.out, out);
        } else if (svar->parsed()) {
            const Integrand f = parse_integrand(integrand_arg, net);
            const ExperimentResult res = variance_experiment(net, f, reps, seed, depth);
            json r{{"replicates", res.replicates},
                   {"seed", seed},
                   {"mean", res.estimate_mean},
                   {"empirical_variance", res.estimate_variance},
                   {"standard_error", res.variance_standard_error}};
            double theory;
            if (res.target) {
                put_rational(r, "theoretical", *res.target);
                theory = to_double(*res.target);
            } else {
                const auto spec = integrand_spectrum(net.field(), f, net.s());
                theory = theoretical_variance(net, spec);
                r["theoretical_decimal"] = theory;
            }
            r["z_score"] = res.variance_standard_error > 0 ? (res.estimate_variance - theory) / res.variance_standard_error
                                                            : 0.0;
            emit(report("scramble-var", net, r).dump(2), common.out, out);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "netgain: error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace netgain::cli
