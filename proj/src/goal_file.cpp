#include "feesh/goal_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace feesh::goals {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_number(std::string_view text, std::size_t line, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParseError(line, "bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

UtilityBinding parse_utility(std::string_view text, std::size_t line) {
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw ParseError(line, "utility must look like name(params): '" + std::string(text) + "'");
    }
    UtilityBinding binding;
    try {
        binding.fn = utility_fn_from_string(trim(text.substr(0, open)));
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, e.what());
    }
    const auto inner = trim(text.substr(open + 1, text.size() - open - 2));
    if (inner.empty()) return binding;
    for (auto item : split(inner, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError(line, "utility parameter needs key=value: '" + std::string(item) + "'");
        const auto key = std::string(trim(item.substr(0, eq)));
        if (key.empty()) throw ParseError(line, "empty utility parameter name");
        if (binding.params.contains(key)) throw ParseError(line, "repeated utility parameter '" + key + "'");
        binding.params[key] = parse_number(trim(item.substr(eq + 1)), line, "utility parameter");
    }
    return binding;
}

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

GoalModel parse_goal_file(std::string_view text) {
    GoalModel model;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(start, end - start);
        start = end + 1;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto fields = split(line, ';');
        if (fields.size() != 7 && fields.size() != 8) {
            throw ParseError(line_no, "expected 7 or 8 ';'-separated fields, got " + std::to_string(fields.size()));
        }

        Goal goal;
        goal.id = std::string(fields[0]);
        if (goal.id.empty()) throw ParseError(line_no, "empty goal id");

        if (fields[1] == "Maintain") goal.kind = GoalKind::Maintain;
        else if (fields[1] == "Achieve") goal.kind = GoalKind::Achieve;
        else throw ParseError(line_no, "kind must be Maintain or Achieve");

        if (fields[2] == "true") goal.invariant = true;
        else if (fields[2] == "false") goal.invariant = false;
        else throw ParseError(line_no, "invariant must be true or false");

        if (fields[3] == "AND") goal.refinement = Refinement::And;
        else if (fields[3] == "OR") goal.refinement = Refinement::Or;
        else if (fields[3] == "Leaf") goal.refinement = Refinement::Leaf;
        else throw ParseError(line_no, "refinement must be AND, OR or Leaf");

        if (fields[4] != "-") {
            for (auto child : split(fields[4], ',')) {
                if (child.empty()) throw ParseError(line_no, "empty child id");
                goal.children.emplace_back(child);
            }
        }

        if (fields[5] != "-") goal.utility = parse_utility(fields[5], line_no);

        goal.threshold = fields[6] == "-" ? default_threshold(goal.kind)
                                          : parse_number(fields[6], line_no, "threshold");
        if (fields.size() == 8) goal.label = std::string(fields[7]);

        try {
            model.add(std::move(goal));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return model;
}

GoalModel load_goal_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open goal file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_goal_file(buffer.str());
}

std::string format_goal_file(const GoalModel& model) {
    std::ostringstream out;
    out << "# id; kind; invariant; refinement; children; utility(params); threshold; label\n";
    for (const auto& g : model.goals()) {
        out << g.id << "; " << to_string(g.kind) << "; " << (g.invariant ? "true" : "false") << "; "
            << to_string(g.refinement) << "; ";
        if (g.children.empty()) {
            out << '-';
        } else {
            for (std::size_t i = 0; i < g.children.size(); ++i) out << (i ? "," : "") << g.children[i];
        }
        out << "; ";
        if (g.utility) {
            out << to_string(g.utility->fn) << '(';
            bool first = true;
            for (const auto& [k, v] : g.utility->params) {
                out << (first ? "" : ",") << k << '=' << format_number(v);
                first = false;
            }
            out << ')';
        } else {
            out << '-';
        }
        out << "; " << format_number(g.threshold);
        if (!g.label.empty()) out << "; " << g.label;
        out << '\n';
    }
    return out.str();
}

const ValidatedGoalModel& default_goal_model() {
    static const ValidatedGoalModel model = ValidatedGoalModel::create(parse_goal_file(default_goal_file_text()));
    return model;
}

}  // namespace feesh::goals
