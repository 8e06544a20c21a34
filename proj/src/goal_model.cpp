#include "feesh/goal_model.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace feesh::goals {

std::string_view to_string(GoalKind kind) { return kind == GoalKind::Maintain ? "Maintain" : "Achieve"; }

std::string_view to_string(Refinement refinement) {
    switch (refinement) {
        case Refinement::And: return "AND";
        case Refinement::Or: return "OR";
        case Refinement::Leaf: return "Leaf";
    }
    return "?";
}

std::string_view to_string(Status status) {
    switch (status) {
        case Status::Satisfied: return "Satisfied";
        case Status::Satisficed: return "Satisficed";
        case Status::Violated: return "Violated";
    }
    return "?";
}

std::string_view to_string(IssueKind kind) {
    switch (kind) {
        case IssueKind::Cycle: return "cycle";
        case IssueKind::OrphanChild: return "orphan-child";
        case IssueKind::LeafWithoutUtility: return "leaf-without-utility";
        case IssueKind::LeafWithChildren: return "leaf-with-children";
        case IssueKind::RefinedWithUtility: return "refined-with-utility";
        case IssueKind::RefinedWithoutChildren: return "refined-without-children";
        case IssueKind::NoRoot: return "no-root";
        case IssueKind::MultipleRoots: return "multiple-roots";
        case IssueKind::BadThreshold: return "bad-threshold";
        case IssueKind::BadUtility: return "bad-utility";
        case IssueKind::Empty: return "empty";
    }
    return "?";
}

void GoalModel::add(Goal goal) {
    if (find(goal.id) != nullptr) throw std::invalid_argument("duplicate goal id '" + goal.id + "'");
    goals_.push_back(std::move(goal));
}

const Goal* GoalModel::find(std::string_view id) const {
    auto it = std::find_if(goals_.begin(), goals_.end(), [&](const Goal& g) { return g.id == id; });
    return it == goals_.end() ? nullptr : &*it;
}

const Goal& GoalModel::at(std::string_view id) const {
    const Goal* goal = find(id);
    if (goal == nullptr) throw std::out_of_range("no goal '" + std::string(id) + "'");
    return *goal;
}

std::vector<GoalId> GoalModel::roots() const {
    std::set<GoalId> referenced;
    for (const auto& g : goals_) referenced.insert(g.children.begin(), g.children.end());
    std::vector<GoalId> out;
    for (const auto& g : goals_) {
        if (!referenced.contains(g.id)) out.push_back(g.id);
    }
    return out;
}

bool ValidationReport::has(IssueKind kind) const {
    return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.kind == kind; });
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (const auto& issue : issues) {
        out << goals::to_string(issue.kind);
        if (!issue.goal.empty()) out << " [" << issue.goal << "]";
        if (!issue.detail.empty()) out << ": " << issue.detail;
        out << '\n';
    }
    return out.str();
}

namespace {

// Returns the goals on one cycle per strongly-connected back edge, in visit order.
std::vector<std::vector<GoalId>> find_cycles(const GoalModel& model) {
    enum class Mark { White, Grey, Black };
    std::unordered_map<GoalId, Mark> mark;
    std::vector<GoalId> stack;
    std::vector<std::vector<GoalId>> cycles;

    std::function<void(const Goal&)> visit = [&](const Goal& goal) {
        mark[goal.id] = Mark::Grey;
        stack.push_back(goal.id);
        for (const auto& child_id : goal.children) {
            const Goal* child = model.find(child_id);
            if (child == nullptr) continue;
            auto m = mark[child_id];
            if (m == Mark::Grey) {
                auto start = std::find(stack.begin(), stack.end(), child_id);
                cycles.emplace_back(start, stack.end());
            } else if (m == Mark::White) {
                visit(*child);
            }
        }
        stack.pop_back();
        mark[goal.id] = Mark::Black;
    };

    for (const auto& goal : model.goals()) {
        if (mark[goal.id] == Mark::White) visit(goal);
    }
    return cycles;
}

}  // namespace

ValidationReport validate(const GoalModel& model) {
    ValidationReport report;
    auto add = [&](IssueKind kind, const GoalId& id, std::string detail) {
        report.issues.push_back({kind, id, std::move(detail)});
    };

    if (model.size() == 0) {
        add(IssueKind::Empty, "", "model has no goals");
        return report;
    }

    for (const auto& goal : model.goals()) {
        if (!(goal.threshold >= 0.0 && goal.threshold <= 1.0)) {
            add(IssueKind::BadThreshold, goal.id, "threshold must lie on [0, 1]");
        }
        for (const auto& child : goal.children) {
            if (model.find(child) == nullptr) add(IssueKind::OrphanChild, goal.id, "child '" + child + "' does not resolve");
        }
        if (goal.refinement == Refinement::Leaf) {
            if (!goal.utility) add(IssueKind::LeafWithoutUtility, goal.id, "");
            if (!goal.children.empty()) add(IssueKind::LeafWithChildren, goal.id, "");
        } else {
            if (goal.utility) add(IssueKind::RefinedWithUtility, goal.id, "");
            if (goal.children.empty()) add(IssueKind::RefinedWithoutChildren, goal.id, "");
        }
        if (goal.utility) {
            if (auto problem = check_binding(*goal.utility); !problem.empty()) {
                add(IssueKind::BadUtility, goal.id, problem);
            }
        }
    }

    for (const auto& cycle : find_cycles(model)) {
        std::string path;
        for (const auto& id : cycle) path += id + " -> ";
        path += cycle.front();
        add(IssueKind::Cycle, cycle.front(), path);
    }

    const auto roots = model.roots();
    if (roots.empty()) {
        add(IssueKind::NoRoot, "", "every goal is some goal's child");
    } else if (roots.size() > 1) {
        std::string ids;
        for (const auto& id : roots) ids += (ids.empty() ? "" : ", ") + id;
        add(IssueKind::MultipleRoots, "", ids);
    }
    return report;
}

InvalidModel::InvalidModel(ValidationReport report)
    : std::runtime_error("invalid goal model:\n" + report.to_string()), report_(std::move(report)) {}

ValidatedGoalModel ValidatedGoalModel::create(GoalModel model) {
    auto report = validate(model);
    if (!report.ok()) throw InvalidModel(std::move(report));

    ValidatedGoalModel out;
    out.root_ = model.roots().front();

    std::unordered_map<GoalId, std::size_t> index;
    for (std::size_t i = 0; i < model.goals().size(); ++i) index[model.goals()[i].id] = i;

    // Post-order from the root: children always precede their parents.
    std::vector<bool> seen(model.size(), false);
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (seen[i]) return;
        seen[i] = true;
        for (const auto& child : model.goals()[i].children) visit(index.at(child));
        out.order_.push_back(i);
    };
    visit(index.at(out.root_));
    out.model_ = std::move(model);
    return out;
}

Status classify(double value, double threshold) {
    if (value < threshold) return Status::Violated;
    if (value >= 1.0) return Status::Satisfied;
    return Status::Satisficed;
}

double GoalEvaluation::value(std::string_view id) const {
    auto it = results.find(std::string(id));
    if (it == results.end()) throw std::out_of_range("no evaluation for goal '" + std::string(id) + "'");
    return it->second.value;
}

Status GoalEvaluation::status(std::string_view id) const {
    auto it = results.find(std::string(id));
    if (it == results.end()) throw std::out_of_range("no evaluation for goal '" + std::string(id) + "'");
    return it->second.status;
}

GoalEvaluation evaluate(const ValidatedGoalModel& validated, const MetricsSnapshot& snapshot) {
    const auto& goals = validated.model().goals();
    GoalEvaluation eval;
    eval.tick = snapshot.tick;

    for (std::size_t i : validated.evaluation_order()) {
        const Goal& goal = goals[i];
        double value = 0.0;
        switch (goal.refinement) {
            case Refinement::Leaf:
                value = evaluate_binding(*goal.utility, snapshot);
                break;
            case Refinement::And:
                value = 1.0;
                for (const auto& child : goal.children) value = std::min(value, eval.results.at(child).value);
                break;
            case Refinement::Or:
                value = 0.0;
                for (const auto& child : goal.children) value = std::max(value, eval.results.at(child).value);
                break;
        }
        const Status status = classify(value, goal.threshold);
        eval.results[goal.id] = {value, status};
        if (goal.invariant && status == Status::Violated) eval.fatal = true;
    }
    return eval;
}

}  // namespace feesh::goals
