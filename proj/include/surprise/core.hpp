#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace surprise {

// Bad inputs (configs, files, parameter ranges). CLI maps this to exit 2.
class validation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Valid inputs, but the run could not produce a usable result
// (e.g. conditioning never satisfied). CLI maps this to exit 3.
class diagnostic_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A total preference order over m candidates, best to worst.
struct PreferenceOrder {
    std::vector<int> ranking;

    explicit PreferenceOrder(std::vector<int> r);

    int candidate_count() const { return static_cast<int>(ranking.size()); }

    // 0-based position of a candidate in this order
    int position_of(int candidate) const;
};

// Number of candidate pairs the two orders rank oppositely; equals the
// minimum number of adjacent transpositions between them.
int kt_distance(const PreferenceOrder& a, const PreferenceOrder& b);

// All m! preference classes in lexicographic order of their rankings,
// with the pairwise Kendall-tau distance matrix.
//
// For m = 3 the lexicographic enumeration is
//   0: a1>a2>a3   1: a1>a3>a2   2: a2>a1>a3
//   3: a2>a3>a1   4: a3>a1>a2   5: a3>a2>a1
class ClassSystem {
  public:
    static ClassSystem build(int m);  // 2 <= m <= 6

    int m() const { return m_; }
    int num_classes() const { return static_cast<int>(classes_.size()); }
    const PreferenceOrder& class_order(int k) const { return classes_[k]; }
    const std::vector<PreferenceOrder>& classes() const { return classes_; }
    int kt(int j, int k) const { return kt_[j][k]; }

    // position of `candidate` in class k's ranking
    int position(int k, int candidate) const { return positions_[k][candidate]; }

  private:
    ClassSystem() = default;
    int m_ = 0;
    std::vector<PreferenceOrder> classes_;
    std::vector<std::vector<int>> kt_;
    std::vector<std::vector<int>> positions_;
};

// Probability of a fresh voter landing in each class.
struct ClassDistribution {
    std::vector<double> eps;

    explicit ClassDistribution(std::vector<double> e);

    int num_classes() const { return static_cast<int>(eps.size()); }
};

// Symmetric class-to-class connection probabilities. Entries must be in
// (0,1]: a zero entry would make the perception estimate divide by zero,
// so it is rejected at construction.
class ConnectionMatrix {
  public:
    explicit ConnectionMatrix(std::vector<std::vector<double>> p);

    int size() const { return static_cast<int>(p_.size()); }
    double at(int j, int k) const { return p_[j][k]; }
    const std::vector<std::vector<double>>& rows() const { return p_; }

  private:
    std::vector<std::vector<double>> p_;
};

// True if every row is monotone non-increasing in KT distance
// (strictly decreasing when `strict`).
bool is_regular(const ConnectionMatrix& p, const ClassSystem& cs, bool strict = false);

// Monotone estimation error: within every row, the ratio true/estimated
// connection probability is non-increasing in KT distance (strictly
// decreasing when `strict`).
bool satisfies_mee(const ConnectionMatrix& p, const ConnectionMatrix& phat,
                   const ClassSystem& cs, bool strict = false);

// Positional scoring rule. `scores[i]` is awarded to the candidate ranked
// at position i of a vote; entries are non-increasing with scores[0] >
// scores[m-1]. Winners are invariant to positive scaling and shifts of
// the vector.
struct ScoringRule {
    std::string name;
    std::vector<double> scores;

    ScoringRule(std::string n, std::vector<double> s);

    int m() const { return static_cast<int>(scores.size()); }
};

// plurality: (1,0,...,0)
// borda:     (m-1,m-2,...,0) scaled to sum 1; (2/3,1/3,0) for m=3
// veto:      (1,...,1,0) scaled to sum 1;     (1/2,1/2,0) for m=3
ScoringRule preset_rule(const std::string& name, int m);

// --- JSON model files ------------------------------------------------------
// {"m": int, "eps": [...], "p": [[...]]}
// Validation failures name the offending entry, e.g. "p[1][2]".

struct ModelInput {
    int m;
    ClassDistribution eps;
    ConnectionMatrix p;
};

ClassDistribution class_distribution_from_json(const nlohmann::json& j,
                                               const std::string& field = "eps");
ConnectionMatrix connection_matrix_from_json(const nlohmann::json& j,
                                             const std::string& field = "p");
ModelInput load_model_json(const std::filesystem::path& file);

}  // namespace surprise
