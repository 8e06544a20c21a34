#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "feesh/goal_model.hpp"

namespace feesh::goals {

// Goal-model files hold one goal per line:
//
//   id; kind; invariant; refinement; children; utility(params); threshold[; label]
//
//   kind        Maintain | Achieve
//   invariant   true | false
//   refinement  AND | OR | Leaf
//   children    comma-separated ids, or '-'
//   utility     util_fps(floor=30,full=40), util_const_one(), ... or '-'
//   threshold   number on [0, 1], or '-' for the kind's default
//   label       optional free text
//
// '#' starts a comment; blank lines are ignored.

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Parses goal-file text. Structural problems (cycles, dangling children) are
/// left to validate(); only syntax errors throw.
GoalModel parse_goal_file(std::string_view text);

GoalModel load_goal_file(const std::filesystem::path& path);

std::string format_goal_file(const GoalModel& model);

/// Text of the bundled feesh.goals model.
std::string_view default_goal_file_text();

/// The bundled model, validated.
const ValidatedGoalModel& default_goal_model();

}  // namespace feesh::goals
