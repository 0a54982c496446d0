#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "netgain/net.hpp"

namespace netgain {

using nlohmann::json;

std::string net_to_json(const DigitalNet& net) {
    json j;
    j["b"] = net.b();
    j["p"] = net.field().p();
    j["r"] = net.field().r();
    j["poly"] = net.field().poly();
    j["s"] = net.s();
    j["m"] = net.m();
    j["n"] = net.n();
    json mats = json::array();
    for (const auto& c : net.matrices()) {
        json rows = json::array();
        for (std::size_t r = 0; r < c.rows(); ++r) {
            json row = json::array();
            for (auto e : c.row(r)) row.push_back(static_cast<int>(e));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    j["matrices"] = std::move(mats);
    return j.dump();
}

DigitalNet net_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("net file is not valid JSON: ") + e.what());
    }
    try {
        const int b = j.at("b").get<int>();
        const int p = j.at("p").get<int>();
        const int r = j.at("r").get<int>();
        const int s = j.at("s").get<int>();
        const int m = j.at("m").get<int>();
        const int n = j.at("n").get<int>();
        std::optional<std::vector<int>> poly;
        if (r > 1 && j.contains("poly")) poly = j.at("poly").get<std::vector<int>>();
        Field field = Field::make(p, r, poly);
        if (field.b() != b) throw std::invalid_argument("net file: b does not equal p^r");

        const auto& mats = j.at("matrices");
        if (!mats.is_array() || mats.size() != static_cast<std::size_t>(s))
            throw std::invalid_argument("net file: expected s matrices");
        std::vector<FieldMatrix> out;
        for (const auto& jm : mats) {
            if (!jm.is_array() || jm.size() != static_cast<std::size_t>(n))
                throw std::invalid_argument("net file: each matrix needs n rows");
            FieldMatrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
            for (std::size_t row = 0; row < jm.size(); ++row) {
                const auto& jr = jm[row];
                if (!jr.is_array() || jr.size() != static_cast<std::size_t>(m))
                    throw std::invalid_argument("net file: each row needs m entries");
                for (std::size_t col = 0; col < jr.size(); ++col) {
                    const int e = jr[col].get<int>();
                    if (e < 0 || e >= b) throw std::invalid_argument("net file: entry outside the field");
                    c.at(row, col) = static_cast<Element>(e);
                }
            }
            out.push_back(std::move(c));
        }
        return DigitalNet(std::move(field), s, m, n, std::move(out));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("net file: ") + e.what());
    }
}

DigitalNet read_net_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open net file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return net_from_json(ss.str());
}

void write_net_file(const DigitalNet& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write net file " + path);
    out << net_to_json(net) << '\n';
}

}  // namespace netgain
