#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairpost {

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a rate (tpr, fpr, selection rate, base rate) has a zero
/// denominator. Rates never silently turn into NaN.
class UndefinedRateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by realize_point for targets outside the hull region. Carries the
/// signed distance to the region boundary (positive = outside).
class InfeasiblePointError : public std::runtime_error {
public:
    InfeasiblePointError(const std::string& msg, double signed_distance)
        : std::runtime_error(msg), signed_distance(signed_distance) {}

    double signed_distance;
};

/// Sensitive-group identifier. Ids are dense 0..G-1.
struct GroupId {
    int id = 0;
    std::string label;
};

/// Grouped binary labels and predictions, one entry per individual.
struct LabeledPredictions {
    std::vector<int> groups;
    std::vector<int> labels;
    std::vector<int> predictions;
    int n_groups = 0;

    std::size_t size() const { return groups.size(); }
    void validate() const;
};

/// Grouped real-valued scores with binary labels.
struct ScoreSet {
    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<int> groups;
    int n_groups = 0;

    std::size_t size() const { return scores.size(); }
    void validate() const;
};

namespace detail {
void check_group_vector(const std::vector<int>& groups, int n_groups);
void check_binary(const std::vector<int>& values, const char* name);
}  // namespace detail

}  // namespace fairpost
