#include "surprise/io.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace surprise {

void write_text_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw validation_error("cannot write " + file.string());
    out << content;
    if (!out) throw validation_error("failed writing " + file.string());
}

void dump_election_sample(const ElectionSample& sample, const std::filesystem::path& edges_file,
                          const std::filesystem::path& sidecar_file) {
    std::string edges;
    for (int u = 0; u < sample.n; ++u) {
        for (int v : sample.neighbors[u]) {
            if (v <= u) continue;
            edges += std::to_string(u);
            edges += ' ';
            edges += std::to_string(v);
            edges += '\n';
        }
    }
    write_text_file(edges_file, edges);

    nlohmann::json j;
    j["n"] = sample.n;
    j["num_classes"] = sample.num_classes;
    j["sigma"] = sample.sigma;
    j["counts"] = sample.counts;
    write_text_file(sidecar_file, j.dump(2) + "\n");
}

ElectionSample load_election_sample(const std::filesystem::path& edges_file,
                                    const std::filesystem::path& sidecar_file) {
    std::ifstream side(sidecar_file);
    if (!side) throw validation_error("cannot open " + sidecar_file.string());
    nlohmann::json j;
    side >> j;

    ElectionSample s;
    s.n = j.at("n").get<int>();
    s.num_classes = j.at("num_classes").get<int>();
    s.sigma = j.at("sigma").get<std::vector<int>>();
    s.counts = j.at("counts").get<std::vector<long long>>();
    if (static_cast<int>(s.sigma.size()) != s.n)
        throw validation_error(sidecar_file.string() + ": sigma length != n");
    s.neighbors.assign(s.n, {});

    std::ifstream in(edges_file);
    if (!in) throw validation_error("cannot open " + edges_file.string());
    int u, v;
    while (in >> u >> v) {
        if (u < 0 || v < 0 || u >= s.n || v >= s.n || u == v)
            throw validation_error(edges_file.string() + ": bad edge");
        s.neighbors[u].push_back(v);
        s.neighbors[v].push_back(u);
    }
    for (auto& row : s.neighbors) std::sort(row.begin(), row.end());
    return s;
}

}  // namespace surprise
