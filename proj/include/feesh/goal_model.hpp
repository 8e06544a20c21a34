#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "feesh/metrics.hpp"
#include "feesh/utility.hpp"

namespace feesh::goals {

using GoalId = std::string;

enum class GoalKind { Maintain, Achieve };
enum class Refinement { And, Or, Leaf };

std::string_view to_string(GoalKind kind);
std::string_view to_string(Refinement refinement);

/// Satisfaction threshold used when a goal does not set one.
constexpr double default_threshold(GoalKind kind) { return kind == GoalKind::Maintain ? 1.0 : 0.5; }

struct Goal {
    GoalId id;
    std::string label;
    GoalKind kind{GoalKind::Achieve};
    /// Violation of an invariant goal is fatal; others tolerate transient violation.
    bool invariant{false};
    Refinement refinement{Refinement::Leaf};
    std::vector<GoalId> children;
    std::optional<UtilityBinding> utility;
    double threshold{0.5};

    bool operator==(const Goal&) const = default;
};

/// A KAOS refinement graph. Goals are kept in insertion order so that reports
/// and evaluations list them the way the model author wrote them.
class GoalModel {
public:
    GoalModel() = default;

    /// Adds a goal. Throws std::invalid_argument on a duplicate id.
    void add(Goal goal);

    const Goal* find(std::string_view id) const;
    const Goal& at(std::string_view id) const;
    const std::vector<Goal>& goals() const { return goals_; }
    std::size_t size() const { return goals_.size(); }

    /// Ids that no other goal lists as a child.
    std::vector<GoalId> roots() const;

    bool operator==(const GoalModel&) const = default;

private:
    std::vector<Goal> goals_;
};

enum class IssueKind {
    Cycle,
    OrphanChild,
    LeafWithoutUtility,
    LeafWithChildren,
    RefinedWithUtility,
    RefinedWithoutChildren,
    NoRoot,
    MultipleRoots,
    BadThreshold,
    BadUtility,
    Empty,
};

std::string_view to_string(IssueKind kind);

struct ValidationIssue {
    IssueKind kind;
    GoalId goal;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    bool has(IssueKind kind) const;
    std::string to_string() const;
};

ValidationReport validate(const GoalModel& model);

class InvalidModel : public std::runtime_error {
public:
    explicit InvalidModel(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// A goal model that has passed validation, with a children-first
/// evaluation order precomputed. Immutable; safe to share across threads.
class ValidatedGoalModel {
public:
    /// Throws InvalidModel if validation reports any issue.
    static ValidatedGoalModel create(GoalModel model);

    const GoalModel& model() const { return model_; }
    const GoalId& root() const { return root_; }
    const std::vector<std::size_t>& evaluation_order() const { return order_; }

private:
    ValidatedGoalModel() = default;

    GoalModel model_;
    GoalId root_;
    std::vector<std::size_t> order_;
};

enum class Status { Satisfied, Satisficed, Violated };
std::string_view to_string(Status status);

struct GoalResult {
    double value{0.0};
    Status status{Status::Violated};
    bool operator==(const GoalResult&) const = default;
};

struct GoalEvaluation {
    std::uint64_t tick{0};
    /// Keyed by goal id.
    std::map<GoalId, GoalResult> results;
    /// True iff some invariant goal is Violated.
    bool fatal{false};

    double value(std::string_view id) const;
    Status status(std::string_view id) const;
    bool operator==(const GoalEvaluation&) const = default;
};

/// Leaves evaluate through their bindings, AND goals take the minimum of
/// their children and OR goals the maximum. Statuses follow each goal's
/// threshold: below it is Violated, 1.0 is Satisfied, anything in between
/// is Satisficed to a degree equal to the value.
GoalEvaluation evaluate(const ValidatedGoalModel& model, const MetricsSnapshot& snapshot);

Status classify(double value, double threshold);

}  // namespace feesh::goals
