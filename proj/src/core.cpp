#include "surprise/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace surprise {

namespace {

std::string fmt_entry(const std::string& field, int i) {
    std::ostringstream os;
    os << field << "[" << i << "]";
    return os.str();
}

std::string fmt_entry(const std::string& field, int i, int j) {
    std::ostringstream os;
    os << field << "[" << i << "][" << j << "]";
    return os.str();
}

}  // namespace

PreferenceOrder::PreferenceOrder(std::vector<int> r) : ranking(std::move(r)) {
    const int m = static_cast<int>(ranking.size());
    if (m < 2) throw validation_error("preference order needs at least 2 candidates");
    std::vector<bool> seen(m, false);
    for (int c : ranking) {
        if (c < 0 || c >= m || seen[c])
            throw validation_error("preference order is not a permutation of 0.." +
                                   std::to_string(m - 1));
        seen[c] = true;
    }
}

int PreferenceOrder::position_of(int candidate) const {
    for (int i = 0; i < candidate_count(); ++i)
        if (ranking[i] == candidate) return i;
    throw validation_error("candidate " + std::to_string(candidate) + " not in order");
}

int kt_distance(const PreferenceOrder& a, const PreferenceOrder& b) {
    const int m = a.candidate_count();
    if (m != b.candidate_count())
        throw validation_error("kt_distance: orders have different candidate counts");
    int d = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const int x = a.ranking[i], y = a.ranking[j];
            // a ranks x above y; discordant if b ranks y above x
            if (b.position_of(y) < b.position_of(x)) ++d;
        }
    }
    return d;
}

ClassSystem ClassSystem::build(int m) {
    if (m < 2 || m > 6)
        throw validation_error("class system supports 2 <= m <= 6, got " + std::to_string(m));
    ClassSystem cs;
    cs.m_ = m;
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        cs.classes_.emplace_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const int c = static_cast<int>(cs.classes_.size());
    cs.kt_.assign(c, std::vector<int>(c, 0));
    for (int j = 0; j < c; ++j)
        for (int k = j + 1; k < c; ++k)
            cs.kt_[j][k] = cs.kt_[k][j] = kt_distance(cs.classes_[j], cs.classes_[k]);

    cs.positions_.assign(c, std::vector<int>(m, 0));
    for (int k = 0; k < c; ++k)
        for (int pos = 0; pos < m; ++pos)
            cs.positions_[k][cs.classes_[k].ranking[pos]] = pos;
    return cs;
}

ClassDistribution::ClassDistribution(std::vector<double> e) : eps(std::move(e)) {
    if (eps.empty()) throw validation_error("eps: empty distribution");
    double sum = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] >= 0.0 && eps[i] <= 1.0))
            throw validation_error(fmt_entry("eps", static_cast<int>(i)) +
                                   ": must be in [0,1], got " + std::to_string(eps[i]));
        sum += eps[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw validation_error("eps: entries sum to " + std::to_string(sum) + ", expected 1");
}

ConnectionMatrix::ConnectionMatrix(std::vector<std::vector<double>> p) : p_(std::move(p)) {
    const int c = static_cast<int>(p_.size());
    if (c == 0) throw validation_error("p: empty matrix");
    for (int j = 0; j < c; ++j) {
        if (static_cast<int>(p_[j].size()) != c)
            throw validation_error("p: row " + std::to_string(j) + " has wrong length");
        for (int k = 0; k < c; ++k) {
            const double v = p_[j][k];
            if (!(v > 0.0 && v <= 1.0))
                throw validation_error(fmt_entry("p", j, k) + ": must be in (0,1], got " +
                                       std::to_string(v));
        }
    }
    for (int j = 0; j < c; ++j)
        for (int k = j + 1; k < c; ++k)
            if (p_[j][k] != p_[k][j])
                throw validation_error(fmt_entry("p", j, k) + ": matrix not symmetric");
}

namespace {

// f(k) must be monotone along increasing kt distance within each row.
template <typename F>
bool row_monotone(const ClassSystem& cs, int row, F value, bool strict) {
    const int c = cs.num_classes();
    for (int k = 0; k < c; ++k) {
        for (int l = 0; l < c; ++l) {
            if (cs.kt(row, k) < cs.kt(row, l)) {
                const double a = value(row, k), b = value(row, l);
                if (strict ? !(a > b) : !(a >= b)) return false;
            }
        }
    }
    return true;
}

}  // namespace

bool is_regular(const ConnectionMatrix& p, const ClassSystem& cs, bool strict) {
    if (p.size() != cs.num_classes())
        throw validation_error("is_regular: matrix size does not match class count");
    for (int j = 0; j < p.size(); ++j)
        if (!row_monotone(cs, j, [&](int r, int k) { return p.at(r, k); }, strict)) return false;
    return true;
}

bool satisfies_mee(const ConnectionMatrix& p, const ConnectionMatrix& phat,
                   const ClassSystem& cs, bool strict) {
    if (p.size() != cs.num_classes() || phat.size() != cs.num_classes())
        throw validation_error("satisfies_mee: matrix size does not match class count");
    for (int j = 0; j < p.size(); ++j) {
        auto ratio = [&](int r, int k) { return p.at(r, k) / phat.at(r, k); };
        if (!row_monotone(cs, j, ratio, strict)) return false;
    }
    return true;
}

ScoringRule::ScoringRule(std::string n, std::vector<double> s)
    : name(std::move(n)), scores(std::move(s)) {
    if (scores.size() < 2) throw validation_error("scoring rule needs at least 2 entries");
    for (std::size_t i = 0; i + 1 < scores.size(); ++i)
        if (scores[i] < scores[i + 1])
            throw validation_error("scoring rule '" + name + "': scores must be non-increasing");
    if (!(scores.front() > scores.back()))
        throw validation_error("scoring rule '" + name + "': top score must exceed bottom");
}

ScoringRule preset_rule(const std::string& name, int m) {
    if (m < 2) throw validation_error("preset_rule: m must be >= 2");
    std::vector<double> s(m, 0.0);
    if (name == "plurality") {
        s[0] = 1.0;
    } else if (name == "borda") {
        const double total = static_cast<double>(m) * (m - 1) / 2.0;
        for (int i = 0; i < m; ++i) s[i] = static_cast<double>(m - 1 - i) / total;
    } else if (name == "veto") {
        for (int i = 0; i < m - 1; ++i) s[i] = 1.0 / static_cast<double>(m - 1);
    } else {
        throw validation_error("unknown scoring rule '" + name + "'");
    }
    return ScoringRule(name, std::move(s));
}

ClassDistribution class_distribution_from_json(const nlohmann::json& j,
                                               const std::string& field) {
    if (!j.contains(field)) throw validation_error(field + ": missing");
    const auto& arr = j.at(field);
    if (!arr.is_array()) throw validation_error(field + ": expected an array");
    std::vector<double> eps;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw validation_error(fmt_entry(field, static_cast<int>(i)) + ": expected a number");
        eps.push_back(arr[i].get<double>());
    }
    return ClassDistribution(std::move(eps));
}

ConnectionMatrix connection_matrix_from_json(const nlohmann::json& j,
                                             const std::string& field) {
    if (!j.contains(field)) throw validation_error(field + ": missing");
    const auto& mat = j.at(field);
    if (!mat.is_array()) throw validation_error(field + ": expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < mat.size(); ++r) {
        if (!mat[r].is_array())
            throw validation_error(fmt_entry(field, static_cast<int>(r)) + ": expected a row");
        std::vector<double> row;
        for (std::size_t c = 0; c < mat[r].size(); ++c) {
            if (!mat[r][c].is_number())
                throw validation_error(fmt_entry(field, static_cast<int>(r), static_cast<int>(c)) +
                                       ": expected a number");
            row.push_back(mat[r][c].get<double>());
        }
        rows.push_back(std::move(row));
    }
    return ConnectionMatrix(std::move(rows));
}

ModelInput load_model_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw validation_error("cannot open model file: " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error("model file " + file.string() + ": " + e.what());
    }
    if (!j.contains("m") || !j.at("m").is_number_integer())
        throw validation_error("m: missing or not an integer");
    const int m = j.at("m").get<int>();
    auto eps = class_distribution_from_json(j);
    auto p = connection_matrix_from_json(j);
    const auto cs = ClassSystem::build(m);
    if (eps.num_classes() != cs.num_classes())
        throw validation_error("eps: expected " + std::to_string(cs.num_classes()) +
                               " entries for m=" + std::to_string(m) + ", got " +
                               std::to_string(eps.num_classes()));
    if (p.size() != cs.num_classes())
        throw validation_error("p: expected a " + std::to_string(cs.num_classes()) + "x" +
                               std::to_string(cs.num_classes()) + " matrix for m=" +
                               std::to_string(m));
    return ModelInput{m, std::move(eps), std::move(p)};
}

}  // namespace surprise
